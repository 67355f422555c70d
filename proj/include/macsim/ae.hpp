#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>

#include "macsim/payload.hpp"
#include "macsim/rng.hpp"
#include "macsim/token.hpp"

namespace macsim {

/// Round budget for the rotating leader election:
/// T = max(1, ceil(c_t * N * log2(Nh)^3 * log2(log2(Nh)))) with Nh = max(N, 4).
uint64_t ae_compute_t(uint64_t n_estimate, double c_t);

enum class AePhase : uint8_t { One, Two, Decided };

/// Best qualifying message folded per round: minimum (rank, sender token).
struct AeRoundBest {
    uint64_t rank = 0;
    Token sender;
    Value val = 0;
};

/// Two-phase almost-everywhere agreement: estimate the network size from
/// geometric coin experiments, then run T rounds of rank-based rotating
/// leader election with per-round deferral buffers.
struct AeState {
    Token id;
    Value val = 0;
    uint32_t x = 0;        // tails before first heads, then the received max
    uint64_t n_est = 1;    // N = 2^x after phase 1
    uint64_t t_budget = 0; // T
    uint64_t round = 0;    // i, 1-based once phase 2 starts
    uint64_t rank = 0;     // rho for the current round; 0 encodes infinite
    bool rank_infinite = true;
    AePhase phase = AePhase::One;
    std::set<uint32_t> phase1_seen;              // R1
    std::map<uint64_t, AeRoundBest> round_best;  // finite-rank minimum per round tag
    double c_t = 1.0;

    friend bool operator==(const AeState&, const AeState&) = default;
};

struct AeAckResult {
    std::optional<Payload> broadcast;
    bool decided_now = false;
};

AeState ae_phase1_init(Token id, Value input, double c_t, RandomSource& rng, Payload& out_broadcast);

void ae_on_recv(AeState& s, const Payload& m, Token sender);

/// Ack of the phase-1 broadcast: fold the received estimates, size the
/// round budget, and start round 1 within the same handler.
AeAckResult ae_phase1_on_ack(AeState& s, RandomSource& rng);

/// Ack of the round-i broadcast: adopt the minimum-rank qualifying value
/// for round i, discard stale tags, then either decide (i = T) or start
/// round i+1.
AeAckResult ae_round_end_on_ack(AeState& s, RandomSource& rng);

} // namespace macsim
