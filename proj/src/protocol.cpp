#include "macsim/protocol.hpp"

#include <stdexcept>

namespace macsim {

std::string to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::CounterRace: return "counter-race";
        case ProtocolKind::CounterRaceIdGen: return "counter-race+idgen";
        case ProtocolKind::IdGen: return "id-gen";
        case ProtocolKind::AeAgreement: return "ae-agreement";
    }
    return "?";
}

ProtocolKind protocol_from_string(const std::string& s) {
    if (s == "counter-race") return ProtocolKind::CounterRace;
    if (s == "counter-race+idgen") return ProtocolKind::CounterRaceIdGen;
    if (s == "id-gen") return ProtocolKind::IdGen;
    if (s == "ae-agreement") return ProtocolKind::AeAgreement;
    throw std::invalid_argument("unknown protocol: " + s);
}

namespace {
int binary_input(Value input) {
    if (input != 0 && input != 1) throw std::invalid_argument("binary consensus input must be 0 or 1");
    return static_cast<int>(input);
}
} // namespace

NodeState proto_init(ProtocolKind kind, NodeId node, Value input, const ProtocolParams& params,
                     RandomSource& rng, HandlerResult& out) {
    out = {};
    Payload bcast;
    switch (kind) {
        case ProtocolKind::CounterRace: {
            auto s = cr_init(Token::plain(node), binary_input(input), bcast, params.cr_margin);
            out.broadcast = bcast;
            return s;
        }
        case ProtocolKind::CounterRaceIdGen: {
            auto s = composed_init(binary_input(input), bcast);
            out.broadcast = bcast;
            return s;
        }
        case ProtocolKind::IdGen: {
            auto s = id_init(bcast);
            out.broadcast = bcast;
            return s;
        }
        case ProtocolKind::AeAgreement: {
            auto s = ae_phase1_init(Token::plain(node), input, params.ae_c_t, rng, bcast);
            out.broadcast = bcast;
            return s;
        }
    }
    throw std::logic_error("unreachable");
}

void proto_on_recv(NodeState& s, const Payload& m, NodeId sender) {
    std::visit(
        [&](auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, CounterRaceState>) {
                cr_on_recv(st, m);
            } else if constexpr (std::is_same_v<T, ComposedState>) {
                composed_on_recv(st, m);
            } else if constexpr (std::is_same_v<T, IdGenState>) {
                if (const auto* bits = std::get_if<IdBits>(&m)) id_on_recv(st, bits->bits);
            } else {
                ae_on_recv(st, m, Token::plain(sender));
            }
        },
        s);
}

HandlerResult proto_on_ack(NodeState& s, const Payload& acked, RandomSource& rng) {
    return std::visit(
        [&](auto& st) -> HandlerResult {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, CounterRaceState>) {
                CrAckResult r = cr_on_ack(st, acked, rng);
                return {r.broadcast, r.halted};
            } else if constexpr (std::is_same_v<T, ComposedState>) {
                CrAckResult r = composed_on_ack(st, acked, rng);
                return {r.broadcast, r.halted};
            } else if constexpr (std::is_same_v<T, IdGenState>) {
                IdAckResult r = id_on_ack(st, rng);
                return {r.broadcast, r.adopted_now};
            } else {
                AeAckResult r = st.phase == AePhase::One ? ae_phase1_on_ack(st, rng)
                                                         : ae_round_end_on_ack(st, rng);
                return {r.broadcast, r.decided_now};
            }
        },
        s);
}

std::optional<Value> proto_decision(const NodeState& s) {
    return std::visit(
        [](const auto& st) -> std::optional<Value> {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, CounterRaceState>) {
                if (st.decided) return Value{*st.decided};
            } else if constexpr (std::is_same_v<T, ComposedState>) {
                if (st.race && st.race->decided) return Value{*st.race->decided};
            } else if constexpr (std::is_same_v<T, AeState>) {
                if (st.phase == AePhase::Decided) return st.val;
            }
            return std::nullopt;
        },
        s);
}

namespace {
bool cr_satisfies(const CounterRaceState& st, const std::optional<Payload>& outstanding) {
    if (st.decided || st.decide_latch) return true;
    return outstanding && std::holds_alternative<CrDecide>(*outstanding);
}
} // namespace

bool proto_satisfies_termination(const NodeState& s, const std::optional<Payload>& outstanding) {
    return std::visit(
        [&](const auto& st) -> bool {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, CounterRaceState>) {
                return cr_satisfies(st, outstanding);
            } else if constexpr (std::is_same_v<T, ComposedState>) {
                return st.race && cr_satisfies(*st.race, outstanding);
            } else if constexpr (std::is_same_v<T, IdGenState>) {
                return st.adopted.has_value();
            } else {
                return st.phase == AePhase::Decided;
            }
        },
        s);
}

} // namespace macsim
