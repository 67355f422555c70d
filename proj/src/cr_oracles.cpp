#include "macsim/cr_oracles.hpp"

#include <algorithm>
#include <set>

namespace macsim {

CrTraceAnalyzer::CrTraceAnalyzer(uint32_t n, bool group_oracle) : n_(n), group_oracle_(group_oracle) {
    crashed_.assign(n, 0);
    inited_.assign(n, 0);
    hat_.assign(n, {0, 0});
    seen_.resize(n);
    latch_.resize(n);
    decided_.resize(n);
    outstanding_decide_.assign(n, 0);
    acks_at_node_.assign(n, 0);
    group_started_nonnop_.assign(n, 0);
    group_recv_nonnop_.assign(n, 0);
    for (int b = 0; b < 2; ++b) {
        hi_cache_[b] = 0;
        hi_arg_[b] = 0;
        maxhat_cache_[b] = 0;
    }
}

void CrTraceAnalyzer::note_violation(const std::string& what) { violations_.push_back(what); }

void CrTraceAnalyzer::recompute_hi(int b) {
    uint64_t best = UINT64_MAX;
    uint32_t arg = n_;
    for (NodeId u = 0; u < n_; ++u) {
        if (crashed_[u]) continue;
        if (hat_[u][b] < best) {
            best = hat_[u][b];
            arg = u;
        }
    }
    hi_cache_[b] = best; // UINT64_MAX when everyone crashed
    hi_arg_[b] = arg;
}

void CrTraceAnalyzer::recompute_maxhat(int b) {
    uint64_t best = 0;
    for (NodeId u = 0; u < n_; ++u)
        if (!crashed_[u]) best = std::max(best, hat_[u][b]);
    maxhat_cache_[b] = best;
}

void CrTraceAnalyzer::fold_counter_seen(NodeId node, uint64_t c, int v) {
    seen_[node][v].insert(c);
    if (c > hat_[node][v]) {
        hat_[node][v] = c;
        if (!crashed_[node]) {
            if (hi_arg_[v] == node) recompute_hi(v);
            maxhat_cache_[v] = std::max(maxhat_cache_[v], c);
        }
    }
}

DominatedInterval CrTraceAnalyzer::dominated_interval(int b) const {
    // Condition 1 needs c >= every non-crashed node's opposing maximum and
    // c < every non-crashed node's own-value maximum; condition 2 needs
    // c >= every in-transit opposing counter. hi is exclusive.
    uint64_t lo = maxhat_cache_[1 - b];
    const auto& transit = transit_counts_[1 - b];
    if (!transit.empty()) lo = std::max(lo, std::prev(transit.end())->first);
    return {lo, hi_cache_[b]};
}

bool CrTraceAnalyzer::is_dominated(int b, uint64_t c) const {
    return dominated_interval(b).contains(c);
}

void CrTraceAnalyzer::on_counter_broadcast(NodeId sender, uint64_t c, int v, uint64_t seq,
                                           uint64_t bcast_id) {
    if (c > 0) {
        for (NodeId w = 0; w < n_; ++w) {
            if (crashed_[w]) continue;
            if (!seen_[w][v].count(c - 1)) {
                increment_ok_ = false;
                note_violation("increment: event " + std::to_string(seq) + " counter " +
                               std::to_string(c) + "/" + std::to_string(v) + " but node " +
                               std::to_string(w) + " never saw " + std::to_string(c - 1));
                break;
            }
        }
    }
    fold_counter_seen(sender, c, v);
    TransitMsg msg;
    msg.value = v;
    msg.counter = c;
    for (NodeId w = 0; w < n_; ++w)
        if (w != sender && !crashed_[w]) msg.undelivered.push_back(w);
    msg.remaining = static_cast<uint32_t>(msg.undelivered.size());
    if (msg.remaining > 0) {
        transit_counts_[v][c] += 1;
        transit_.emplace(bcast_id, std::move(msg));
    }
}

void CrTraceAnalyzer::drop_transit(std::map<uint64_t, TransitMsg>::iterator it) {
    auto cit = transit_counts_[it->second.value].find(it->second.counter);
    if (--cit->second == 0) transit_counts_[it->second.value].erase(cit);
    transit_.erase(it);
}

void CrTraceAnalyzer::feed(const TraceEvent& e) {
    std::optional<std::pair<int, uint64_t>> predecision; // (b, opposing hat) to verify post-fold
    bool group_boundary_completed = false;
    NodeId u = e.node;

    switch (e.kind) {
        case EventKind::Init:
            inited_[u] = 1;
            break;

        case EventKind::Recv: {
            if (e.payload) {
                if (const auto* c = std::get_if<CrCounter>(&*e.payload)) {
                    fold_counter_seen(u, c->c, c->v);
                } else if (const auto* d = std::get_if<CrDecide>(&*e.payload)) {
                    latch_[u] = d->v;
                }
                if (acks_at_node_[u] >= 1 && ((acks_at_node_[u] - 1) % kCrGroupLen) + 1 <= 5 &&
                    !std::holds_alternative<CrNop>(*e.payload))
                    group_recv_nonnop_[u] = 1;
            }
            if (e.broadcast_id) {
                auto it = transit_.find(*e.broadcast_id);
                if (it != transit_.end()) {
                    auto& und = it->second.undelivered;
                    auto uit = std::find(und.begin(), und.end(), u);
                    if (uit != und.end()) {
                        und.erase(uit);
                        if (--it->second.remaining == 0) drop_transit(it);
                    }
                }
            }
            break;
        }

        case EventKind::Ack: {
            const uint64_t k = ++acks_at_node_[u];
            if (e.payload && std::holds_alternative<CrDecide>(*e.payload)) {
                decided_[u] = std::get<CrDecide>(*e.payload).v;
            }
            if (k % kCrGroupLen == 1) {
                if (k > 1) group_boundary_completed = true;
            }
            break;
        }

        case EventKind::Crash: {
            crashed_[u] = 1;
            if (hi_arg_[0] == u) recompute_hi(0);
            if (hi_arg_[1] == u) recompute_hi(1);
            recompute_maxhat(0);
            recompute_maxhat(1);
            for (auto it = transit_.begin(); it != transit_.end();) {
                auto& und = it->second.undelivered;
                auto uit = std::find(und.begin(), und.end(), u);
                if (uit != und.end()) {
                    und.erase(uit);
                    if (--it->second.remaining == 0) {
                        auto next = std::next(it);
                        drop_transit(it);
                        it = next;
                        continue;
                    }
                }
                ++it;
            }
            break;
        }
    }

    // Fold the broadcast a combined event emitted.
    if (e.combined && e.bcast_payload) {
        if (const auto* c = std::get_if<CrCounter>(&*e.bcast_payload)) {
            on_counter_broadcast(e.node, c->c, c->v, e.seq, *e.bcast_id);
        } else if (const auto* d = std::get_if<CrDecide>(&*e.bcast_payload)) {
            outstanding_decide_[e.node] = 1;
            if (!decide_broadcast_seen_) {
                decide_broadcast_seen_ = true;
                predecision = {{d->v, hat_[e.node][1 - d->v]}};
            }
        }
    }

    // Group bookkeeping for the clean-group consequence. A group boundary
    // ack both completes the previous group and opens the next.
    if (group_oracle_ && e.kind == EventKind::Ack && acks_at_node_[u] % kCrGroupLen == 1) {
        if (group_boundary_completed && group_started_nonnop_[u] && !group_recv_nonnop_[u]) {
            clean_groups_seen_ += 1;
            if (!termination_state_now()) {
                clean_group_ok_ = false;
                note_violation("clean group at node " + std::to_string(u) + " ended at event " +
                               std::to_string(e.seq) + " without reaching the termination state");
            }
        }
        group_started_nonnop_[u] =
            e.combined && e.bcast_payload && !std::holds_alternative<CrNop>(*e.bcast_payload);
        group_recv_nonnop_[u] = 0;
    }

    if (predecision) {
        const auto [b, opposing] = *predecision;
        if (!is_dominated(b, opposing + 1)) {
            predecision_ok_ = false;
            note_violation("pre-decision: first decide broadcast at event " + std::to_string(e.seq) +
                           " not (" + std::to_string(b) + "," + std::to_string(opposing + 1) +
                           ")-dominated");
        }
    }

    check_monotonicity();
}

void CrTraceAnalyzer::check_monotonicity() {
    for (int b = 0; b < 2; ++b) {
        const DominatedInterval now = dominated_interval(b);
        const DominatedInterval& prev = prev_interval_[b];
        if (!prev.empty() && (now.lo > prev.lo || now.hi < prev.hi)) {
            monotone_ok_ = false;
            note_violation("domination lost for b=" + std::to_string(b) + ": [" +
                           std::to_string(prev.lo) + "," + std::to_string(prev.hi) + ") -> [" +
                           std::to_string(now.lo) + "," + std::to_string(now.hi) + ")");
        }
        prev_interval_[b] = now;
    }
}

void CrTraceAnalyzer::feed_all(const std::vector<TraceEvent>& events) {
    for (const auto& e : events) feed(e);
}

bool CrTraceAnalyzer::termination_state_now() const {
    for (NodeId u = 0; u < n_; ++u) {
        if (crashed_[u]) continue;
        if (!inited_[u]) return false;
        if (!(decided_[u] || latch_[u] || outstanding_decide_[u])) return false;
    }
    return true;
}

bool CrTraceAnalyzer::agreement_ok() const {
    std::set<int> values;
    for (const auto& d : decided_)
        if (d) values.insert(*d);
    return values.size() <= 1;
}

bool CrTraceAnalyzer::validity_ok(const std::vector<Value>& inputs) const {
    for (const auto& d : decided_) {
        if (!d) continue;
        if (std::find(inputs.begin(), inputs.end(), Value{*d}) == inputs.end()) return false;
    }
    return true;
}

bool CrTraceAnalyzer::all_ok(const std::vector<Value>& inputs) const {
    return violations_.empty() && agreement_ok() && validity_ok(inputs);
}

uint64_t CrTraceAnalyzer::seen_mask(NodeId node, int v) const {
    uint64_t mask = 0;
    for (uint64_t c : seen_[node][v]) mask |= uint64_t{1} << (c & 63);
    return mask;
}

TraceShapeChecker::TraceShapeChecker(uint32_t n) : n_(n) {
    crashed_.assign(n, 0);
    outstanding_.resize(n);
}

void TraceShapeChecker::feed(const TraceEvent& e) {
    switch (e.kind) {
        case EventKind::Init:
            break;
        case EventKind::Recv: {
            auto it = open_.find(*e.broadcast_id);
            if (it == open_.end()) {
                violations_.push_back("recv of unknown broadcast");
                return;
            }
            auto& exp = it->second.expected;
            auto uit = std::find(exp.begin(), exp.end(), e.node);
            if (uit == exp.end()) {
                violations_.push_back("duplicate or unexpected recv at node " +
                                      std::to_string(e.node));
                return;
            }
            exp.erase(uit);
            break;
        }
        case EventKind::Ack: {
            auto it = open_.find(*e.broadcast_id);
            if (it == open_.end()) {
                violations_.push_back("ack of unknown broadcast");
                return;
            }
            if (it->second.sender != e.node) violations_.push_back("ack at non-sender");
            if (!it->second.expected.empty())
                violations_.push_back("ack before all receives resolved");
            if (!outstanding_[e.node] || *outstanding_[e.node] != it->first)
                violations_.push_back("ack does not match outstanding broadcast");
            outstanding_[e.node].reset();
            open_.erase(it);
            break;
        }
        case EventKind::Crash: {
            crashed_[e.node] = 1;
            for (auto it = open_.begin(); it != open_.end();) {
                auto& exp = it->second.expected;
                exp.erase(std::remove(exp.begin(), exp.end(), e.node), exp.end());
                if (it->second.sender == e.node && outstanding_[e.node] &&
                    *outstanding_[e.node] == it->first && exp.empty()) {
                    it = open_.erase(it); // sender gone; no ack will come
                    outstanding_[e.node].reset();
                    continue;
                }
                ++it;
            }
            break;
        }
    }
    if (e.combined && e.bcast_id) {
        if (outstanding_[e.node])
            violations_.push_back("node " + std::to_string(e.node) +
                                  " broadcast while a broadcast was unacknowledged");
        Open o;
        o.sender = e.node;
        for (NodeId v = 0; v < n_; ++v)
            if (v != e.node && !crashed_[v]) o.expected.push_back(v);
        open_[*e.bcast_id] = std::move(o);
        outstanding_[e.node] = *e.bcast_id;
    }
}

void TraceShapeChecker::finish() {
    for (const auto& [id, o] : open_) {
        if (!o.expected.empty())
            violations_.push_back("broadcast " + std::to_string(id) + " never fully delivered");
        else if (!crashed_[o.sender])
            violations_.push_back("broadcast " + std::to_string(id) + " never acknowledged");
    }
}

} // namespace macsim
