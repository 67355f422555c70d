#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "macsim/event.hpp"
#include "macsim/payload.hpp"
#include "macsim/protocol.hpp"
#include "macsim/rng.hpp"
#include "macsim/trace.hpp"

namespace macsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A policy picked an event that is not currently enabled. This is a
/// harness bug, never a protocol outcome, so trials abort on it.
struct SchedulerContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

/// A message being delivered: who sent it, what it carries (in stored,
/// possibly scrambled form), who still has to receive it, and whether the
/// sender still awaits the acknowledgment.
struct PendingBroadcast {
    uint64_t id = 0;
    NodeId sender = 0;
    Payload stored;
    std::vector<NodeId> undelivered; // ascending
    bool ack_pending = true;
};

/// One event of the redacted history a scheduler may see: metadata only,
/// never payload contents, private state, or random bits.
struct ViewEvent {
    EventKind kind = EventKind::Init;
    NodeId node = 0;
    bool combined = false;
    std::optional<uint64_t> broadcast_id;
    std::optional<NodeId> from;
};

struct SchedulerView {
    uint32_t n = 0;
    std::vector<Value> inputs;
    std::vector<Event> enabled;            // canonical order
    std::vector<uint64_t> acks_per_node;
    std::vector<uint8_t> crashed;
    uint32_t inits_pending = 0;
    const std::vector<ViewEvent>* history = nullptr; // null when retention is off
};

struct WorldOptions {
    bool record_trace = false;
    bool retain_view_history = false;
    int64_t max_crashes = -1; // -1: default n-1
    uint64_t codec_key = 0;   // nonzero turns on payload scrambling
};

struct NodeSlot {
    bool inited = false;
    bool halted = false;
    NodeState state;
    std::optional<uint64_t> outstanding; // id of the unacknowledged broadcast
};

class WorldState {
public:
    WorldState() = default;
    /// Builds the initial world: every node's init enabled first, per-node
    /// random tapes derived from (seed, node index), ack count zero.
    WorldState(uint32_t n, ProtocolKind protocol, std::vector<Value> inputs, uint64_t seed,
               ProtocolParams params = {}, WorldOptions options = {});

    /// Replaces per-node randomness with enumeration bit tapes.
    void use_tapes(size_t bound);

    uint32_t n() const { return n_; }
    ProtocolKind protocol() const { return protocol_; }
    const std::vector<Value>& inputs() const { return inputs_; }
    uint64_t seed() const { return seed_; }
    uint64_t ack_count() const { return ack_count_; }
    uint64_t events_applied() const { return events_applied_; }
    int64_t crash_budget_remaining() const { return crash_budget_; }

    const std::vector<NodeSlot>& nodes() const { return nodes_; }
    const std::vector<uint8_t>& crashed() const { return crashed_; }
    const std::vector<PendingBroadcast>& pending() const { return pending_; }
    const std::vector<uint64_t>& broadcasts_per_node() const { return broadcasts_per_node_; }
    std::vector<RandomSource>& tapes() { return rng_; }

    bool all_inits_applied() const { return inits_pending_ == 0; }

    /// Exactly the events the model permits next, in canonical order.
    /// Init events precede all recv/ack availability; crash choices are
    /// always present while budget remains.
    std::vector<Event> enabled_events() const;

    /// True if any non-crash event is enabled (a finished schedule has
    /// drained every init, recv and ack).
    bool any_protocol_event_enabled() const;

    /// Applies one enabled event atomically (handler steps plus at most one
    /// broadcast) and returns the annotated trace record.
    TraceEvent apply_event(const Event& choice);

    /// Redacted history and enabled set, plus the input assignment.
    SchedulerView scheduler_view() const;

    /// Termination-state predicate, per protocol (see protocol.hpp).
    bool termination_state() const;

    std::map<NodeId, Value> decisions() const;

    const Trace& trace() const { return trace_; }
    Trace& trace() { return trace_; }

    const PendingBroadcast* find_pending(uint64_t id) const;

private:
    PendingBroadcast* find_pending_mut(uint64_t id);
    void start_broadcast(NodeId sender, const Payload& payload, TraceEvent& ev);
    void retire_if_done(uint64_t id);

    uint32_t n_ = 0;
    ProtocolKind protocol_ = ProtocolKind::CounterRace;
    std::vector<Value> inputs_;
    uint64_t seed_ = 0;
    ProtocolParams params_;
    WorldOptions options_;
    PayloadCodec codec_;

    std::vector<NodeSlot> nodes_;
    std::vector<uint8_t> crashed_;
    std::vector<PendingBroadcast> pending_; // ascending broadcast id
    std::vector<RandomSource> rng_;
    std::vector<uint64_t> acks_per_node_;
    std::vector<uint64_t> broadcasts_per_node_;
    std::vector<ViewEvent> view_history_;
    Trace trace_;

    uint64_t ack_count_ = 0;
    uint64_t events_applied_ = 0;
    uint64_t next_broadcast_id_ = 0;
    uint32_t inits_pending_ = 0;
    int64_t crash_budget_ = 0;
};

} // namespace macsim
