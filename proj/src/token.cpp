#include "macsim/token.hpp"

#include <stdexcept>

namespace macsim {

Token Token::from_bits(const std::string& bits) {
    if (bits.empty() || bits.size() > 63)
        throw std::invalid_argument("bit-string length out of range");
    uint64_t v = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("bit-string must be binary");
        v = (v << 1) | static_cast<uint64_t>(ch - '0');
    }
    return Token{bits.size(), v};
}

std::string Token::bits() const {
    std::string out;
    out.reserve(tag_);
    for (uint64_t i = tag_; i > 0; --i) out.push_back(((val_ >> (i - 1)) & 1) ? '1' : '0');
    return out;
}

} // namespace macsim
