#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include <json.hpp>

#include "macsim/token.hpp"

namespace macsim {

using Value = int64_t;

// Counter race wire formats.
struct CrCounter {
    Token id;
    uint64_t c = 0;
    int v = 0;
    uint64_t n_est = 2;
    friend bool operator==(const CrCounter&, const CrCounter&) = default;
};
struct CrNop {
    Token id;
    uint64_t n_est = 2;
    friend bool operator==(const CrNop&, const CrNop&) = default;
};
struct CrDecide {
    int v = 0;
    friend bool operator==(const CrDecide&, const CrDecide&) = default;
};

// Tiebreaking ID generation.
struct IdBits {
    std::string bits;
    friend bool operator==(const IdBits&, const IdBits&) = default;
};

// Almost-everywhere agreement.
struct AePhase1 {
    uint32_t x = 0;
    friend bool operator==(const AePhase1&, const AePhase1&) = default;
};
struct AeRound {
    uint64_t round = 0;
    uint64_t rank = 0; // 0 when infinite
    bool infinite = false;
    Value val = 0;
    friend bool operator==(const AeRound&, const AeRound&) = default;
};

using Payload = std::variant<CrCounter, CrNop, CrDecide, IdBits, AePhase1, AeRound>;

nlohmann::ordered_json payload_to_json(const Payload& p);
Payload payload_from_json(const nlohmann::json& j);

nlohmann::ordered_json token_to_json(const Token& t);
Token token_from_json(const nlohmann::json& j);

/// Keyed involution on payload contents. Scrambles every field a scheduler
/// could conceivably peek at while preserving the payload's shape, so a
/// scrambled world runs the exact same protocol behavior (handlers receive
/// the decoded original) yet stores different bytes. key = 0 is identity.
struct PayloadCodec {
    uint64_t key = 0;

    bool active() const { return key != 0; }
    Payload encode(const Payload& p) const;
    Payload decode(const Payload& p) const { return encode(p); }
};

} // namespace macsim
