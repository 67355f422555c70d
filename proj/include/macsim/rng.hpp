#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace macsim {

/// Counter-based deterministic stream (splitmix64 core). Each logical
/// stream is derived from (seed, domain, index) so that a node's k-th
/// draw is independent of how draws interleave across nodes.
class Prng {
public:
    Prng() = default;
    Prng(uint64_t seed, std::string_view domain, uint64_t index);

    uint64_t next_u64();
    /// Uniform in [0,1) with 53 bits of precision.
    double next_real();
    /// Uniform integer in [lo, hi], inclusive. Rejection sampling, so the
    /// result depends only on this stream's state, never on platform.
    uint64_t uniform(uint64_t lo, uint64_t hi);

private:
    uint64_t state_ = 0x9e3779b97f4a7c15ull;
};

/// Thrown by a TapeSource when a draw lands one past the fixed prefix but
/// still inside the tape bound. The exhaustive enumerator catches this and
/// forks the branch on both bit values.
struct TapeNeedsBit {
    size_t position;
};

/// Thrown when a draw would exceed the tape bound; the branch is abandoned.
struct TapeExhausted {};

/// Finite bit tape for bounded enumeration. Bits are fixed lazily: the
/// prefix holds only bits that some draw has already consumed.
struct TapeSource {
    std::vector<uint8_t> prefix;
    size_t pos = 0;
    size_t bound = 0;

    int next_bit() {
        if (pos < prefix.size()) return prefix[pos++];
        if (prefix.size() >= bound) throw TapeExhausted{};
        throw TapeNeedsBit{pos};
    }
};

/// Per-node randomness as consumed by protocol handlers. Prng mode drives
/// seeded trials; Tape mode drives exhaustive enumeration, where only
/// single-bit draws are meaningful.
class RandomSource {
public:
    RandomSource() : impl_(Prng{}) {}
    explicit RandomSource(Prng p) : impl_(p) {}
    explicit RandomSource(TapeSource t) : impl_(t) {}

    /// True with probability p. Tape mode: one bit, 1 = true (both
    /// outcomes of any nontrivial coin are reachable, which is all the
    /// enumerator needs).
    bool coin(double p);
    /// Uniform bit.
    int bit();
    /// Uniform integer in [lo, hi]. Unsupported on tapes.
    uint64_t uniform(uint64_t lo, uint64_t hi);
    /// Count of continue-flips of a fair coin before the first stop:
    /// P(X = k) = 2^-(k+1), so P(X >= k) = 2^-k.
    uint32_t geometric_half();

    bool is_tape() const { return std::holds_alternative<TapeSource>(impl_); }
    TapeSource& tape() { return std::get<TapeSource>(impl_); }
    const TapeSource& tape() const { return std::get<TapeSource>(impl_); }

private:
    std::variant<Prng, TapeSource> impl_;
};

uint64_t mix64(uint64_t x);

} // namespace macsim
