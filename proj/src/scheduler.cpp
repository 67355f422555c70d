#include "macsim/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace macsim {

std::string to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::UniformRandom: return "uniform";
        case PolicyKind::SynchronousLayers: return "layers";
        case PolicyKind::AdversarialDelay: return "delay";
        case PolicyKind::Exhaustive: return "exhaustive";
    }
    return "?";
}

PolicyKind policy_kind_from_string(const std::string& s) {
    if (s == "uniform") return PolicyKind::UniformRandom;
    if (s == "layers") return PolicyKind::SynchronousLayers;
    if (s == "delay") return PolicyKind::AdversarialDelay;
    if (s == "exhaustive") return PolicyKind::Exhaustive;
    throw std::invalid_argument("unknown scheduler: " + s);
}

std::string PolicyConfig::label() const {
    std::string out = to_string(kind);
    if (crash_p > 0.0 && crash_budget > 0) out += "+crash";
    return out;
}

Policy::Policy(const PolicyConfig& config)
    : config_(config), rng_(config.seed, "policy", 0), crashes_left_(config.crash_budget) {}

Event Policy::choose(const SchedulerView& view) {
    // Crash injection wraps the base policy: with probability p per step,
    // while budget remains, emit a crash instead of the inner choice.
    if (config_.crash_p > 0.0 && crashes_left_ > 0 && rng_.next_real() < config_.crash_p) {
        std::vector<Event> crashes;
        for (const Event& e : view.enabled)
            if (e.kind == EventKind::Crash) crashes.push_back(e);
        if (!crashes.empty()) {
            crashes_left_ -= 1;
            if (config_.crash_target == CrashTarget::Random)
                return crashes[rng_.uniform(0, crashes.size() - 1)];
            // Targeted: take down the node with the most acks so far.
            const Event* best = &crashes.front();
            for (const Event& e : crashes)
                if (view.acks_per_node[e.node] > view.acks_per_node[best->node]) best = &e;
            return *best;
        }
    }
    return base_choice(view);
}

Event Policy::base_choice(const SchedulerView& view) {
    std::vector<Event> candidates;
    candidates.reserve(view.enabled.size());
    for (const Event& e : view.enabled)
        if (e.kind != EventKind::Crash) candidates.push_back(e);
    if (candidates.empty())
        throw SchedulerContractViolation("policy invoked with no protocol event enabled");

    switch (config_.kind) {
        case PolicyKind::UniformRandom:
            return candidates[rng_.uniform(0, candidates.size() - 1)];

        case PolicyKind::SynchronousLayers: {
            // Drain receives, then acks, round-robin over node order.
            const Event* pick = nullptr;
            for (EventKind want : {EventKind::Recv, EventKind::Ack}) {
                NodeId& cursor = want == EventKind::Recv ? recv_cursor_ : ack_cursor_;
                uint64_t best_rank = UINT64_MAX;
                for (const Event& e : candidates) {
                    if (e.kind != want) continue;
                    const uint64_t dist = (uint64_t{e.node} + view.n - cursor) % view.n;
                    const uint64_t rank = dist * (uint64_t{1} << 32) + e.broadcast_id;
                    if (rank < best_rank) {
                        best_rank = rank;
                        pick = &e;
                    }
                }
                if (pick) {
                    cursor = static_cast<NodeId>((pick->node + 1) % view.n);
                    return *pick;
                }
            }
            return candidates.front(); // inits, in node order
        }

        case PolicyKind::AdversarialDelay: {
            // Keep per-node ack counts maximally uneven: push the most
            // advanced node forward, starving the laggard's progress.
            const Event* pick = nullptr;
            for (const Event& e : candidates) {
                if (e.kind != EventKind::Ack) continue;
                if (!pick || view.acks_per_node[e.node] > view.acks_per_node[pick->node] ||
                    (view.acks_per_node[e.node] == view.acks_per_node[pick->node] &&
                     e.node < pick->node))
                    pick = &e;
            }
            if (pick) return *pick;
            // No ack ready: drain receives oldest-broadcast-first so the
            // leader's next ack unlocks as early as possible.
            for (const Event& e : candidates) {
                if (e.kind != EventKind::Recv) continue;
                if (!pick || e.broadcast_id < pick->broadcast_id ||
                    (e.broadcast_id == pick->broadcast_id && e.node < pick->node))
                    pick = &e;
            }
            if (pick) return *pick;
            return candidates.front(); // inits
        }

        case PolicyKind::Exhaustive:
            throw SchedulerContractViolation("exhaustive policy cannot make single choices");
    }
    throw std::logic_error("unreachable");
}

} // namespace macsim
