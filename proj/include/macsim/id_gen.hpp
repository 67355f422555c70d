#pragma once

#include <optional>
#include <set>
#include <string>

#include "macsim/payload.hpp"
#include "macsim/rng.hpp"

namespace macsim {

/// Randomized tiebreaking: grow a bit string until no other node has
/// broadcast the same one, then adopt it as an ID.
struct IdGenState {
    std::string bits = "1";
    std::set<std::string> seen;
    std::optional<std::string> adopted;

    friend bool operator==(const IdGenState&, const IdGenState&) = default;
};

struct IdAckResult {
    std::optional<Payload> broadcast; // extended string, absent on adoption
    bool adopted_now = false;
};

IdGenState id_init(Payload& out_broadcast);

void id_on_recv(IdGenState& s, const std::string& bits);

/// Ack of the current string: adopt it if nobody else broadcast it,
/// otherwise append a fresh random bit and try again.
IdAckResult id_on_ack(IdGenState& s, RandomSource& rng);

} // namespace macsim
