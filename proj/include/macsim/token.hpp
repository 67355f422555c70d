#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace macsim {

/// Simulator-level node identity: a dense index into the world's node table.
using NodeId = uint32_t;

/// Protocol-level identity, usable only for equality and total order.
/// Plain tokens wrap a node index; bit tokens wrap an adopted bit string
/// ordered by (length, bits).
class Token {
public:
    Token() = default;

    static Token plain(uint64_t index) { return Token{0, index}; }

    /// Bit string "1b2b3..." -> token ordered by (length, lexicographic bits).
    static Token from_bits(const std::string& bits);

    friend auto operator<=>(const Token&, const Token&) = default;

    bool is_plain() const { return tag_ == 0; }
    uint64_t plain_index() const { return val_; }
    std::string bits() const;

    uint64_t hash_key() const { return (tag_ << 56) ^ val_; }

private:
    Token(uint64_t tag, uint64_t val) : tag_(tag), val_(val) {}
    uint64_t tag_ = 0; // 0 = plain; otherwise bit-string length
    uint64_t val_ = 0; // index, or bits packed MSB-first
};

} // namespace macsim

template <>
struct std::hash<macsim::Token> {
    size_t operator()(const macsim::Token& t) const noexcept {
        return static_cast<size_t>(t.hash_key() * 0x9e3779b97f4a7c15ull);
    }
};
