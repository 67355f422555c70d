#include "macsim/world.hpp"

#include <algorithm>

namespace macsim {

WorldState::WorldState(uint32_t n, ProtocolKind protocol, std::vector<Value> inputs, uint64_t seed,
                       ProtocolParams params, WorldOptions options)
    : n_(n),
      protocol_(protocol),
      inputs_(std::move(inputs)),
      seed_(seed),
      params_(params),
      options_(options),
      codec_{options.codec_key} {
    if (n_ == 0) throw ConfigError("world needs at least one node");
    if (inputs_.size() != n_) throw ConfigError("input arity must match node count");
    nodes_.resize(n_);
    crashed_.assign(n_, 0);
    acks_per_node_.assign(n_, 0);
    broadcasts_per_node_.assign(n_, 0);
    rng_.reserve(n_);
    for (uint32_t i = 0; i < n_; ++i) rng_.emplace_back(Prng(seed_, "node", i));
    inits_pending_ = n_;
    crash_budget_ = options_.max_crashes >= 0 ? options_.max_crashes : int64_t{n_} - 1;
    trace_.header =
        TraceHeader{n_, to_string(protocol_), inputs_, seed_, std::string{}};
}

void WorldState::use_tapes(size_t bound) {
    for (auto& src : rng_) src = RandomSource{TapeSource{{}, 0, bound}};
}

const PendingBroadcast* WorldState::find_pending(uint64_t id) const {
    auto it = std::lower_bound(pending_.begin(), pending_.end(), id,
                               [](const PendingBroadcast& b, uint64_t v) { return b.id < v; });
    return (it != pending_.end() && it->id == id) ? &*it : nullptr;
}

PendingBroadcast* WorldState::find_pending_mut(uint64_t id) {
    return const_cast<PendingBroadcast*>(find_pending(id));
}

std::vector<Event> WorldState::enabled_events() const {
    std::vector<Event> out;
    if (inits_pending_ > 0) {
        for (NodeId v = 0; v < n_; ++v)
            if (!nodes_[v].inited && !crashed_[v]) out.push_back({EventKind::Init, v, 0});
    } else {
        for (const auto& b : pending_) {
            for (NodeId v : b.undelivered) out.push_back({EventKind::Recv, v, b.id});
            if (b.undelivered.empty() && b.ack_pending && !crashed_[b.sender])
                out.push_back({EventKind::Ack, b.sender, b.id});
        }
    }
    if (crash_budget_ > 0) {
        for (NodeId v = 0; v < n_; ++v)
            if (!crashed_[v]) out.push_back({EventKind::Crash, v, 0});
    }
    return out;
}

bool WorldState::any_protocol_event_enabled() const {
    if (inits_pending_ > 0) {
        for (NodeId v = 0; v < n_; ++v)
            if (!nodes_[v].inited && !crashed_[v]) return true;
        return false;
    }
    for (const auto& b : pending_) {
        if (!b.undelivered.empty()) return true;
        if (b.ack_pending && !crashed_[b.sender]) return true;
    }
    return false;
}

void WorldState::start_broadcast(NodeId sender, const Payload& payload, TraceEvent& ev) {
    if (nodes_[sender].outstanding)
        throw SchedulerContractViolation("node already has an unacknowledged broadcast");
    PendingBroadcast b;
    b.id = next_broadcast_id_++;
    b.sender = sender;
    b.stored = codec_.encode(payload);
    for (NodeId v = 0; v < n_; ++v)
        if (v != sender && !crashed_[v]) b.undelivered.push_back(v);
    b.ack_pending = true;
    nodes_[sender].outstanding = b.id;
    broadcasts_per_node_[sender] += 1;
    ev.combined = true;
    ev.bcast_id = b.id;
    ev.bcast_payload = b.stored;
    pending_.push_back(std::move(b));
}

void WorldState::retire_if_done(uint64_t id) {
    auto it = std::lower_bound(pending_.begin(), pending_.end(), id,
                               [](const PendingBroadcast& b, uint64_t v) { return b.id < v; });
    if (it == pending_.end() || it->id != id) return;
    // A broadcast stays pending while anyone must still receive it or the
    // live sender still awaits its ack.
    if (it->undelivered.empty() && (!it->ack_pending || crashed_[it->sender])) pending_.erase(it);
}

TraceEvent WorldState::apply_event(const Event& choice) {
    TraceEvent ev;
    ev.seq = events_applied_;
    ev.kind = choice.kind;
    ev.node = choice.node;

    switch (choice.kind) {
        case EventKind::Init: {
            NodeSlot& slot = nodes_[choice.node];
            if (slot.inited || crashed_[choice.node])
                throw SchedulerContractViolation("init not enabled");
            HandlerResult r;
            slot.state =
                proto_init(protocol_, choice.node, inputs_[choice.node], params_, rng_[choice.node], r);
            slot.inited = true;
            inits_pending_ -= 1;
            if (r.broadcast) start_broadcast(choice.node, *r.broadcast, ev);
            slot.halted = r.halted;
            break;
        }
        case EventKind::Recv: {
            if (inits_pending_ > 0) throw SchedulerContractViolation("recv before all inits");
            PendingBroadcast* b = find_pending_mut(choice.broadcast_id);
            if (!b) throw SchedulerContractViolation("recv of unknown broadcast");
            auto it = std::find(b->undelivered.begin(), b->undelivered.end(), choice.node);
            if (it == b->undelivered.end())
                throw SchedulerContractViolation("recv not enabled for this node");
            b->undelivered.erase(it);
            ev.broadcast_id = b->id;
            ev.from = b->sender;
            ev.payload = b->stored;
            NodeSlot& slot = nodes_[choice.node];
            if (!slot.halted) {
                const Payload plain = codec_.decode(b->stored);
                const NodeId sender = b->sender;
                proto_on_recv(slot.state, plain, sender);
            }
            retire_if_done(choice.broadcast_id);
            break;
        }
        case EventKind::Ack: {
            if (inits_pending_ > 0) throw SchedulerContractViolation("ack before all inits");
            PendingBroadcast* b = find_pending_mut(choice.broadcast_id);
            if (!b || !b->undelivered.empty() || !b->ack_pending || b->sender != choice.node ||
                crashed_[choice.node])
                throw SchedulerContractViolation("ack not enabled");
            const Payload plain = codec_.decode(b->stored);
            ev.broadcast_id = b->id;
            ev.payload = b->stored;
            b->ack_pending = false;
            nodes_[choice.node].outstanding.reset();
            {
                auto it = std::lower_bound(
                    pending_.begin(), pending_.end(), choice.broadcast_id,
                    [](const PendingBroadcast& pb, uint64_t v) { return pb.id < v; });
                pending_.erase(it);
            }
            ack_count_ += 1;
            acks_per_node_[choice.node] += 1;
            NodeSlot& slot = nodes_[choice.node];
            HandlerResult r = proto_on_ack(slot.state, plain, rng_[choice.node]);
            if (r.halted) slot.halted = true;
            if (r.broadcast) start_broadcast(choice.node, *r.broadcast, ev);
            break;
        }
        case EventKind::Crash: {
            if (crashed_[choice.node]) throw SchedulerContractViolation("node already crashed");
            if (crash_budget_ <= 0) throw SchedulerContractViolation("crash budget exhausted");
            crash_budget_ -= 1;
            crashed_[choice.node] = 1;
            if (!nodes_[choice.node].inited) inits_pending_ -= 1;
            std::vector<uint64_t> to_check;
            for (auto& b : pending_) {
                auto it = std::find(b.undelivered.begin(), b.undelivered.end(), choice.node);
                if (it != b.undelivered.end()) b.undelivered.erase(it);
                if (b.sender == choice.node || b.undelivered.empty()) to_check.push_back(b.id);
            }
            for (uint64_t id : to_check) retire_if_done(id);
            break;
        }
    }

    ev.ack_count_after = ack_count_;
    events_applied_ += 1;
    if (options_.record_trace) trace_.events.push_back(ev);
    if (options_.retain_view_history)
        view_history_.push_back({ev.kind, ev.node, ev.combined, ev.broadcast_id, ev.from});
    return ev;
}

SchedulerView WorldState::scheduler_view() const {
    SchedulerView v;
    v.n = n_;
    v.inputs = inputs_;
    v.enabled = enabled_events();
    v.acks_per_node = acks_per_node_;
    v.crashed = crashed_;
    v.inits_pending = inits_pending_;
    v.history = options_.retain_view_history ? &view_history_ : nullptr;
    return v;
}

bool WorldState::termination_state() const {
    for (NodeId v = 0; v < n_; ++v) {
        if (crashed_[v]) continue;
        if (!nodes_[v].inited) return false;
        std::optional<Payload> outstanding;
        if (nodes_[v].outstanding) {
            if (const PendingBroadcast* b = find_pending(*nodes_[v].outstanding))
                outstanding = codec_.decode(b->stored);
        }
        if (!proto_satisfies_termination(nodes_[v].state, outstanding)) return false;
    }
    return true;
}

std::map<NodeId, Value> WorldState::decisions() const {
    std::map<NodeId, Value> out;
    for (NodeId v = 0; v < n_; ++v) {
        if (!nodes_[v].inited) continue;
        if (auto d = proto_decision(nodes_[v].state)) out[v] = *d;
    }
    return out;
}

} // namespace macsim
