#include "macsim/compose.hpp"

namespace macsim {

ComposedState composed_init(int input, Payload& out_broadcast) {
    ComposedState s;
    s.input = input;
    s.idgen = id_init(out_broadcast);
    return s;
}

void composed_on_recv(ComposedState& s, const Payload& m) {
    if (const auto* bits = std::get_if<IdBits>(&m)) {
        if (!s.race) id_on_recv(s.idgen, bits->bits);
        return; // a running node is done with the ID exchange
    }
    if (s.race) {
        cr_on_recv(*s.race, m);
    } else {
        s.buffered.push_back(m);
    }
}

CrAckResult composed_on_ack(ComposedState& s, const Payload& acked, RandomSource& rng) {
    if (s.race) return cr_on_ack(*s.race, acked, rng);

    IdAckResult r = id_on_ack(s.idgen, rng);
    if (!r.adopted_now) return {r.broadcast, false};

    Payload init_broadcast;
    s.race = cr_init(Token::from_bits(*s.idgen.adopted), s.input, init_broadcast);
    for (const Payload& m : s.buffered) cr_on_recv(*s.race, m);
    s.buffered.clear();
    s.buffered.shrink_to_fit();
    return {init_broadcast, false};
}

} // namespace macsim
