#include "macsim/rng.hpp"

namespace macsim {

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {
uint64_t fold(uint64_t acc, uint64_t v) { return mix64(acc ^ (v * 0xff51afd7ed558ccdull)); }
} // namespace

Prng::Prng(uint64_t seed, std::string_view domain, uint64_t index) {
    uint64_t acc = mix64(seed);
    for (char ch : domain) acc = fold(acc, static_cast<uint64_t>(static_cast<unsigned char>(ch)));
    state_ = fold(acc, index);
}

uint64_t Prng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Prng::next_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Prng::uniform(uint64_t lo, uint64_t hi) {
    const uint64_t span = hi - lo + 1; // hi >= lo; span 0 means full range
    if (span == 0) return next_u64();
    const uint64_t reject_below = (0 - span) % span;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= reject_below) return lo + r % span;
    }
}

bool RandomSource::coin(double p) {
    if (auto* t = std::get_if<TapeSource>(&impl_)) return t->next_bit() != 0;
    return std::get<Prng>(impl_).next_real() < p;
}

int RandomSource::bit() {
    if (auto* t = std::get_if<TapeSource>(&impl_)) return t->next_bit();
    return static_cast<int>(std::get<Prng>(impl_).next_u64() >> 63);
}

uint64_t RandomSource::uniform(uint64_t lo, uint64_t hi) {
    if (std::holds_alternative<TapeSource>(impl_))
        throw std::logic_error("uniform draw unsupported on bit tapes");
    return std::get<Prng>(impl_).uniform(lo, hi);
}

uint32_t RandomSource::geometric_half() {
    uint32_t x = 0;
    while (bit() == 1) ++x;
    return x;
}

} // namespace macsim
