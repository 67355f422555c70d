#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "macsim/payload.hpp"
#include "macsim/rng.hpp"
#include "macsim/token.hpp"

namespace macsim {

inline constexpr int kCrDecideMargin = 3;      // k
inline constexpr uint64_t kCrGroupLen = 6;     // k + 3 phases per group

/// Per-node state of the counter race. A value race is decided once one
/// value's largest seen counter leads the other's by the margin.
struct CounterRaceState {
    Token id;
    int v = 0;                                  // current proposal
    uint64_t c = 0;                             // own counter
    uint64_t n_est = 2;                         // network size estimate
    std::set<Token> peers;
    std::map<Token, std::pair<uint64_t, int>> records; // latest (counter, value) per sender
    uint64_t phase = 0;
    bool active = true;
    std::optional<int> decide_latch;            // set on receiving a decide message
    std::optional<int> decided;                 // set when this node decides and halts
    int margin = kCrDecideMargin;               // mutation hook for the model checker

    friend bool operator==(const CounterRaceState&, const CounterRaceState&) = default;
};

/// Largest counters in the record set per value, defaulting to 0.
struct RaceMaxima {
    uint64_t hat_c0 = 0;
    uint64_t hat_c1 = 0;
};

RaceMaxima race_maxima(const CounterRaceState& s);

struct CrAckResult {
    std::optional<Payload> broadcast; // absent only when the node halts
    bool halted = false;
};

/// Initialization block: seed the record set with the node's own input and
/// announce presence with a nop.
CounterRaceState cr_init(Token id, int input, Payload& out_broadcast, int margin = kCrDecideMargin);

/// updateEstimate: runs for every received message carrying an id and an
/// estimate (counter and nop messages; decide messages carry neither).
void update_estimate(CounterRaceState& s, const Payload& m);

/// Receive handler. Counter messages replace the sender's record even if
/// the incoming counter is lower.
void cr_on_recv(CounterRaceState& s, const Payload& m);

/// Acknowledgment handler, in listing order: bump phase, halt on a decide
/// ack, adopt the leading value, check the decide margin, advance the
/// counter, re-flip the active flag at group boundaries, then broadcast
/// either the computed message or a nop camouflage.
CrAckResult cr_on_ack(CounterRaceState& s, const Payload& acked, RandomSource& rng);

} // namespace macsim
