#include "macsim/id_gen.hpp"

namespace macsim {

IdGenState id_init(Payload& out_broadcast) {
    IdGenState s;
    out_broadcast = IdBits{s.bits};
    return s;
}

void id_on_recv(IdGenState& s, const std::string& bits) {
    if (!s.adopted) s.seen.insert(bits);
}

IdAckResult id_on_ack(IdGenState& s, RandomSource& rng) {
    if (!s.seen.contains(s.bits)) {
        s.adopted = s.bits;
        return {std::nullopt, true};
    }
    s.bits.push_back(rng.bit() ? '1' : '0');
    return {Payload{IdBits{s.bits}}, false};
}

} // namespace macsim
