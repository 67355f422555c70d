#pragma once

#include <optional>
#include <string>
#include <variant>

#include "macsim/ae.hpp"
#include "macsim/compose.hpp"
#include "macsim/counter_race.hpp"
#include "macsim/id_gen.hpp"
#include "macsim/payload.hpp"

namespace macsim {

enum class ProtocolKind : uint8_t { CounterRace, CounterRaceIdGen, IdGen, AeAgreement };

std::string to_string(ProtocolKind k);
ProtocolKind protocol_from_string(const std::string& s);

using NodeState = std::variant<CounterRaceState, ComposedState, IdGenState, AeState>;

struct HandlerResult {
    std::optional<Payload> broadcast;
    bool halted = false;
};

/// Tunables threaded through to the per-protocol initializers.
struct ProtocolParams {
    double ae_c_t = 1.0;
    int cr_margin = kCrDecideMargin; // != 3 only in deliberate mutation tests
};

NodeState proto_init(ProtocolKind kind, NodeId node, Value input, const ProtocolParams& params,
                     RandomSource& rng, HandlerResult& out);

void proto_on_recv(NodeState& s, const Payload& m, NodeId sender);

HandlerResult proto_on_ack(NodeState& s, const Payload& acked, RandomSource& rng);

/// Consensus decision, when this node has irrevocably decided.
std::optional<Value> proto_decision(const NodeState& s);

/// Termination-state membership for one node: it decided, latched a decide,
/// or its outstanding broadcast is a decide message (so its next ack
/// decides). For ID generation: it adopted. For a.e. agreement: it decided.
bool proto_satisfies_termination(const NodeState& s, const std::optional<Payload>& outstanding);

} // namespace macsim
