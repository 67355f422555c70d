#include "macsim/payload.hpp"

#include <stdexcept>

#include "macsim/rng.hpp"

namespace macsim {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json token_to_json(const Token& t) {
    if (t.is_plain()) return t.plain_index();
    return t.bits();
}

Token token_from_json(const json& j) {
    if (j.is_number()) return Token::plain(j.get<uint64_t>());
    return Token::from_bits(j.get<std::string>());
}

ordered_json payload_to_json(const Payload& p) {
    ordered_json j;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CrCounter>) {
                j["t"] = "counter";
                j["id"] = token_to_json(m.id);
                j["c"] = m.c;
                j["v"] = m.v;
                j["n"] = m.n_est;
            } else if constexpr (std::is_same_v<T, CrNop>) {
                j["t"] = "nop";
                j["id"] = token_to_json(m.id);
                j["n"] = m.n_est;
            } else if constexpr (std::is_same_v<T, CrDecide>) {
                j["t"] = "decide";
                j["v"] = m.v;
            } else if constexpr (std::is_same_v<T, IdBits>) {
                j["t"] = "idbits";
                j["s"] = m.bits;
            } else if constexpr (std::is_same_v<T, AePhase1>) {
                j["t"] = "p1";
                j["x"] = m.x;
            } else {
                j["t"] = "rd";
                j["i"] = m.round;
                j["rho"] = m.rank;
                j["inf"] = m.infinite;
                j["val"] = m.val;
            }
        },
        p);
    return j;
}

Payload payload_from_json(const json& j) {
    const std::string t = j.at("t").get<std::string>();
    if (t == "counter")
        return CrCounter{token_from_json(j.at("id")), j.at("c").get<uint64_t>(),
                         j.at("v").get<int>(), j.at("n").get<uint64_t>()};
    if (t == "nop") return CrNop{token_from_json(j.at("id")), j.at("n").get<uint64_t>()};
    if (t == "decide") return CrDecide{j.at("v").get<int>()};
    if (t == "idbits") return IdBits{j.at("s").get<std::string>()};
    if (t == "p1") return AePhase1{j.at("x").get<uint32_t>()};
    if (t == "rd")
        return AeRound{j.at("i").get<uint64_t>(), j.at("rho").get<uint64_t>(),
                       j.at("inf").get<bool>(), j.at("val").get<Value>()};
    throw std::invalid_argument("unknown payload tag: " + t);
}

namespace {

// Field-wise xor with stream values derived from (key, slot). Applying the
// same transform twice restores the original.
uint64_t pad(uint64_t key, uint64_t slot) { return mix64(key ^ (slot * 0xd6e8feb86659fd93ull)); }

Token scramble_token(const Token& t, uint64_t key, uint64_t slot) {
    if (t.is_plain()) return Token::plain(t.plain_index() ^ pad(key, slot));
    // Flip every bit after the leading one; length (and the leading 1) kept.
    std::string b = t.bits();
    uint64_t mask = pad(key, slot + 1);
    for (size_t i = 1; i < b.size(); ++i)
        if ((mask >> (i % 64)) & 1) b[i] = (b[i] == '0') ? '1' : '0';
    return Token::from_bits(b);
}

std::string scramble_bits(const std::string& s, uint64_t key, uint64_t slot) {
    std::string b = s;
    uint64_t mask = pad(key, slot);
    for (size_t i = 1; i < b.size(); ++i)
        if ((mask >> (i % 64)) & 1) b[i] = (b[i] == '0') ? '1' : '0';
    return b;
}

} // namespace

Payload PayloadCodec::encode(const Payload& p) const {
    if (!active()) return p;
    const uint64_t k = key;
    return std::visit(
        [&](const auto& m) -> Payload {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CrCounter>) {
                return CrCounter{scramble_token(m.id, k, 1), m.c ^ pad(k, 2),
                                 m.v ^ static_cast<int>(pad(k, 3) & 1), m.n_est ^ pad(k, 4)};
            } else if constexpr (std::is_same_v<T, CrNop>) {
                return CrNop{scramble_token(m.id, k, 5), m.n_est ^ pad(k, 6)};
            } else if constexpr (std::is_same_v<T, CrDecide>) {
                return CrDecide{m.v ^ static_cast<int>(pad(k, 7) & 1)};
            } else if constexpr (std::is_same_v<T, IdBits>) {
                return IdBits{scramble_bits(m.bits, k, 8)};
            } else if constexpr (std::is_same_v<T, AePhase1>) {
                return AePhase1{m.x ^ static_cast<uint32_t>(pad(k, 9))};
            } else {
                return AeRound{m.round ^ pad(k, 10), m.rank ^ pad(k, 11), m.infinite,
                               static_cast<Value>(static_cast<uint64_t>(m.val) ^ pad(k, 12))};
            }
        },
        p);
}

} // namespace macsim
