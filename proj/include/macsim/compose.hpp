#pragma once

#include <optional>
#include <vector>

#include "macsim/counter_race.hpp"
#include "macsim/id_gen.hpp"
#include "macsim/payload.hpp"

namespace macsim {

/// Counter race bootstrapped by tiebreaking ID generation. While the ID is
/// still growing, consensus traffic is buffered in arrival order; on
/// adoption the node initializes the race with the adopted token and
/// replays the buffer through the receive handler, atomically with the
/// adoption ack.
struct ComposedState {
    int input = 0;
    IdGenState idgen;
    std::vector<Payload> buffered;
    std::optional<CounterRaceState> race; // engaged once adopted

    friend bool operator==(const ComposedState&, const ComposedState&) = default;
};

ComposedState composed_init(int input, Payload& out_broadcast);

void composed_on_recv(ComposedState& s, const Payload& m);

CrAckResult composed_on_ack(ComposedState& s, const Payload& acked, RandomSource& rng);

} // namespace macsim
