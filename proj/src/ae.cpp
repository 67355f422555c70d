#include "macsim/ae.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace macsim {

uint64_t ae_compute_t(uint64_t n_estimate, double c_t) {
    if (n_estimate < 1) throw std::invalid_argument("estimate must be >= 1");
    const double nh = static_cast<double>(std::max<uint64_t>(n_estimate, 4));
    const double lg = std::log2(nh);
    const double t = c_t * static_cast<double>(n_estimate) * lg * lg * lg * std::log2(lg);
    const double up = std::ceil(t);
    return std::max<uint64_t>(1, static_cast<uint64_t>(up));
}

namespace {

Payload round_message(const AeState& s) {
    return AeRound{s.round, s.rank, s.rank_infinite, s.val};
}

// Start of a round: become active with probability 1/N; active nodes draw
// a rank from [1, X^4], inactive ones broadcast the infinite-rank dummy.
void ae_round_start(AeState& s, RandomSource& rng) {
    if (rng.coin(1.0 / static_cast<double>(s.n_est))) {
        const uint64_t x = s.x;
        const uint64_t hi = std::max<uint64_t>(1, x * x * x * x);
        s.rank = rng.uniform(1, hi);
        s.rank_infinite = false;
    } else {
        s.rank = 0;
        s.rank_infinite = true;
    }
}

} // namespace

AeState ae_phase1_init(Token id, Value input, double c_t, RandomSource& rng, Payload& out_broadcast) {
    AeState s;
    s.id = id;
    s.val = input;
    s.c_t = c_t;
    s.x = rng.geometric_half();
    out_broadcast = AePhase1{s.x};
    return s;
}

void ae_on_recv(AeState& s, const Payload& m, Token sender) {
    if (s.phase == AePhase::Decided) return;
    if (const auto* p1 = std::get_if<AePhase1>(&m)) {
        if (s.phase == AePhase::One) s.phase1_seen.insert(p1->x);
        return;
    }
    const auto* rd = std::get_if<AeRound>(&m);
    if (!rd || s.phase != AePhase::Two) return;
    if (rd->infinite) return; // dummy message; can never beat any rank
    auto [it, inserted] = s.round_best.try_emplace(rd->round, AeRoundBest{rd->rank, sender, rd->val});
    if (!inserted) {
        AeRoundBest& best = it->second;
        if (rd->rank < best.rank || (rd->rank == best.rank && sender < best.sender))
            best = AeRoundBest{rd->rank, sender, rd->val};
    }
}

AeAckResult ae_phase1_on_ack(AeState& s, RandomSource& rng) {
    for (uint32_t seen : s.phase1_seen) s.x = std::max(s.x, seen);
    s.phase1_seen.clear();
    if (s.x > 62) throw std::runtime_error("phase-1 estimate overflow");
    s.n_est = uint64_t{1} << s.x;
    s.t_budget = ae_compute_t(s.n_est, s.c_t);
    s.phase = AePhase::Two;
    s.round = 1;
    ae_round_start(s, rng);
    return {round_message(s), false};
}

AeAckResult ae_round_end_on_ack(AeState& s, RandomSource& rng) {
    const auto it = s.round_best.find(s.round);
    if (it != s.round_best.end()) {
        const AeRoundBest& best = it->second;
        if (s.rank_infinite || best.rank < s.rank) s.val = best.val;
    }
    // Tags <= i are spent: round i is consumed now, earlier ones are stale.
    s.round_best.erase(s.round_best.begin(), s.round_best.upper_bound(s.round));

    if (s.round >= s.t_budget) {
        s.phase = AePhase::Decided;
        return {std::nullopt, true};
    }
    s.round += 1;
    ae_round_start(s, rng);
    return {round_message(s), false};
}

} // namespace macsim
