#include "macsim/counter_race.hpp"

#include <algorithm>

namespace macsim {

RaceMaxima race_maxima(const CounterRaceState& s) {
    RaceMaxima m;
    for (const auto& [id, rec] : s.records) {
        auto& slot = rec.second == 0 ? m.hat_c0 : m.hat_c1;
        slot = std::max(slot, rec.first);
    }
    return m;
}

CounterRaceState cr_init(Token id, int input, Payload& out_broadcast, int margin) {
    CounterRaceState s;
    s.id = id;
    s.v = input;
    s.c = 0;
    s.n_est = 2;
    s.records[id] = {0, input};
    s.peers.insert(id);
    s.phase = 0;
    s.active = true;
    s.margin = margin;
    out_broadcast = CrNop{id, s.n_est};
    return s;
}

void update_estimate(CounterRaceState& s, const Payload& m) {
    const Token* id = nullptr;
    uint64_t reported = 0;
    if (const auto* c = std::get_if<CrCounter>(&m)) {
        id = &c->id;
        reported = c->n_est;
    } else if (const auto* n = std::get_if<CrNop>(&m)) {
        id = &n->id;
        reported = n->n_est;
    } else {
        return; // decide messages carry no id or estimate
    }
    s.peers.insert(*id);
    s.n_est = std::max({s.n_est, static_cast<uint64_t>(s.peers.size()), reported});
}

void cr_on_recv(CounterRaceState& s, const Payload& m) {
    update_estimate(s, m);
    if (const auto* d = std::get_if<CrDecide>(&m)) {
        s.decide_latch = d->v;
    } else if (const auto* c = std::get_if<CrCounter>(&m)) {
        s.records[c->id] = {c->c, c->v};
    }
}

CrAckResult cr_on_ack(CounterRaceState& s, const Payload& acked, RandomSource& rng) {
    s.phase += 1;

    if (const auto* d = std::get_if<CrDecide>(&acked)) {
        s.decided = d->v;
        return {std::nullopt, true};
    }

    std::optional<Payload> newm;
    const RaceMaxima hat = race_maxima(s);

    if (hat.hat_c0 > hat.hat_c1)
        s.v = 0;
    else if (hat.hat_c1 > hat.hat_c0)
        s.v = 1;

    const uint64_t margin = static_cast<uint64_t>(s.margin);
    if (hat.hat_c0 >= hat.hat_c1 + margin || s.decide_latch == 0) {
        newm = CrDecide{0};
    } else if (hat.hat_c1 >= hat.hat_c0 + margin || s.decide_latch == 1) {
        newm = CrDecide{1};
    }

    if (!newm) {
        const uint64_t top = std::max(hat.hat_c0, hat.hat_c1);
        const bool acked_nop = std::holds_alternative<CrNop>(acked);
        if (top <= s.c && !acked_nop)
            s.c += 1;
        else if (top > s.c)
            s.c = top;
        s.records[s.id] = {s.c, s.v};
        newm = CrCounter{s.id, s.c, s.v, s.n_est};
    }

    if (s.phase % kCrGroupLen == 1)
        s.active = rng.coin(1.0 / static_cast<double>(s.n_est));

    if (std::holds_alternative<CrDecide>(*newm) || s.active) return {newm, false};
    return {Payload{CrNop{s.id, s.n_est}}, false};
}

} // namespace macsim
