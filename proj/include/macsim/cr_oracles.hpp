#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "macsim/counter_race.hpp"
#include "macsim/trace.hpp"

namespace macsim {

/// Half-open interval of counter values c for which a schedule prefix is
/// (b,c)-dominated. Empty when lo >= hi.
struct DominatedInterval {
    uint64_t lo = 0;
    uint64_t hi = 0;
    bool contains(uint64_t c) const { return lo <= c && c < hi; }
    bool empty() const { return lo >= hi; }
};

/// Incremental replay of a counter-race schedule. Feeds on trace events in
/// order and maintains everything the safety proof's definitions quantify
/// over: per-node largest counters sent or received per value, per-node
/// sent-or-received counter sets, in-transit counter messages, crashes,
/// halts and decide latches. All statistics are model-level: a receive
/// event counts even when the (halted) node ignores its content.
class CrTraceAnalyzer {
public:
    /// `group_oracle` enables the clean-group bookkeeping, which assumes
    /// plain counter-race phase accounting (model acks == protocol phases).
    /// Disable it for the composed protocol, where ID-generation acks
    /// precede the race.
    explicit CrTraceAnalyzer(uint32_t n, bool group_oracle = true);

    void feed(const TraceEvent& e);
    void feed_all(const std::vector<TraceEvent>& events);

    /// (b,c)-domination at the current prefix: every non-crashed node has
    /// seen b past c and 1-b at most c, and no in-transit counter message
    /// for 1-b exceeds c.
    bool is_dominated(int b, uint64_t c) const;
    DominatedInterval dominated_interval(int b) const;

    /// Every counter broadcast with counter c > 0 was preceded, at every
    /// node non-crashed at that event, by a sent-or-received counter
    /// message with counter c-1 and the same value.
    bool increment_property_ok() const { return increment_ok_; }

    /// Once (b,c)-dominated, dominated at every later prefix.
    bool domination_monotone() const { return monotone_ok_; }

    /// At the first decide broadcast: dominated for the decide value at the
    /// broadcaster's opposing maximum plus one.
    bool predecision_domination_ok() const { return predecision_ok_; }
    bool saw_decide_broadcast() const { return decide_broadcast_seen_; }

    /// Clean complete groups force the termination state by the group end.
    bool clean_group_consequence_ok() const { return clean_group_ok_; }
    uint64_t clean_groups_seen() const { return clean_groups_seen_; }

    /// Termination state replayed from the schedule alone.
    bool termination_state_now() const;

    bool agreement_ok() const;
    bool validity_ok(const std::vector<Value>& inputs) const;

    const std::vector<std::string>& violations() const { return violations_; }
    bool all_ok(const std::vector<Value>& inputs) const;

    const std::vector<std::optional<int>>& decided() const { return decided_; }

    /// History digest for state hashing in the exhaustive explorer: the
    /// sent-or-received counter set per (node, value) as a bitmask, plus
    /// the oracle flags that depend on the path rather than the world.
    uint64_t seen_mask(NodeId node, int v) const;
    uint8_t group_flags(NodeId node) const {
        return static_cast<uint8_t>(group_started_nonnop_[node] | (group_recv_nonnop_[node] << 1));
    }

private:
    struct TransitMsg {
        int value = 0;
        uint64_t counter = 0;
        uint32_t remaining = 0;
        std::vector<NodeId> undelivered;
    };

    void fold_counter_seen(NodeId node, uint64_t c, int v);
    void note_violation(const std::string& what);
    void on_counter_broadcast(NodeId sender, uint64_t c, int v, uint64_t seq, uint64_t bcast_id);
    void check_monotonicity();
    void recompute_hi(int b);
    void recompute_maxhat(int b);
    void drop_transit(std::map<uint64_t, TransitMsg>::iterator it);

    uint32_t n_ = 0;
    std::vector<uint8_t> crashed_;
    std::vector<uint8_t> inited_;
    // Largest counter sent or received per (node, value); 0 when none.
    std::vector<std::array<uint64_t, 2>> hat_;
    std::vector<std::array<std::unordered_set<uint64_t>, 2>> seen_;
    // In-transit counter messages, keyed by broadcast id, plus a per-value
    // multiset of their counters for fast maxima.
    std::map<uint64_t, TransitMsg> transit_;
    std::array<std::map<uint64_t, uint32_t>, 2> transit_counts_;
    // Cached quantifier bounds: hi = min over non-crashed of hat[.][b],
    // maxhat = max over non-crashed of hat[.][b].
    std::array<uint64_t, 2> hi_cache_{};
    std::array<uint32_t, 2> hi_arg_{};
    std::array<uint64_t, 2> maxhat_cache_{};

    std::vector<std::optional<int>> latch_;
    std::vector<std::optional<int>> decided_;
    std::vector<uint8_t> outstanding_decide_;
    std::vector<uint64_t> acks_at_node_;
    // Per-node current group bookkeeping for the clean-group oracle.
    std::vector<uint8_t> group_started_nonnop_;
    std::vector<uint8_t> group_recv_nonnop_;

    DominatedInterval prev_interval_[2];
    bool group_oracle_ = true;
    bool increment_ok_ = true;
    bool monotone_ok_ = true;
    bool predecision_ok_ = true;
    bool clean_group_ok_ = true;
    bool decide_broadcast_seen_ = false;
    uint64_t clean_groups_seen_ = 0;
    std::vector<std::string> violations_;
};

/// Structural model invariants, protocol-agnostic: every broadcast by a
/// node that does not crash is received exactly once by every node that was
/// non-crashed at broadcast time and then acked by the sender; no node ever
/// holds two unacknowledged broadcasts.
class TraceShapeChecker {
public:
    explicit TraceShapeChecker(uint32_t n);
    void feed(const TraceEvent& e);
    /// Call once the schedule is finished (drained); verifies no remaining
    /// receive/ack obligations among live nodes.
    void finish();
    bool ok() const { return violations_.empty(); }
    const std::vector<std::string>& violations() const { return violations_; }

private:
    struct Open {
        NodeId sender = 0;
        std::vector<NodeId> expected; // still-owed receivers
        bool acked = false;
    };
    uint32_t n_ = 0;
    std::vector<uint8_t> crashed_;
    std::vector<std::optional<uint64_t>> outstanding_;
    std::map<uint64_t, Open> open_;
    std::vector<std::string> violations_;
};

} // namespace macsim
