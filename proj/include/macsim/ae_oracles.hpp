#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "macsim/trace.hpp"

namespace macsim {

/// Replay checker for the rotating leader election. Verifies, from the
/// schedule alone:
///  - adoption correctness / round isolation: the value a node carries into
///    round i+1 is fully determined by the round-i messages it received in
///    phase two before its round-i ack (minimum finite rank below its own,
///    ties by sender), and messages tagged differently have no effect;
///  - minimum-rank propagation: in rounds whose earliest-acked broadcaster
///    is active, alive and uniquely minimum-ranked, and whose message every
///    later-acking node received after entering phase two, all those nodes
///    carry the broadcaster's value out of the round;
///  - validity: decided values originate from inputs.
class AeTraceChecker {
public:
    AeTraceChecker(uint32_t n, std::vector<Value> inputs);

    void feed(const TraceEvent& e);
    void finish();

    bool adoption_ok() const { return adoption_ok_; }
    bool min_rank_propagation_ok() const { return min_rank_ok_; }
    bool validity_ok() const { return validity_ok_; }
    uint64_t min_rank_rounds_checked() const { return min_rank_rounds_checked_; }
    const std::vector<std::string>& violations() const { return violations_; }
    bool all_ok() const { return violations_.empty(); }

    /// Active (finite-rank) broadcast count per round tag.
    const std::map<uint64_t, uint32_t>& active_per_round() const { return active_per_round_; }

    /// The decided value the adoption rule predicts for a node, when its
    /// final round ack was observed. The harness cross-checks these against
    /// the world's actual decisions.
    std::optional<Value> predicted_decision(NodeId node) const { return nodes_[node].decided; }

private:
    struct ReceivedMsg {
        uint64_t round = 0;
        uint64_t rank = 0;
        bool infinite = false;
        Value val = 0;
        NodeId sender = 0;
        bool in_phase_two = false; // receiver had completed phase 1
    };
    struct RoundBroadcast {
        NodeId sender = 0;
        uint64_t rank = 0;
        bool infinite = false;
        Value val = 0;
        uint64_t bcast_seq = 0;
        std::optional<uint64_t> ack_seq;
    };
    struct NodeTrack {
        bool phase2 = false;               // phase-1 ack observed
        std::optional<uint64_t> cur_round; // tag of the outstanding round broadcast
        uint64_t cur_rank = 0;
        bool cur_infinite = true;
        Value cur_val = 0;
        std::vector<ReceivedMsg> received; // round messages, arrival order
        std::optional<Value> decided;
    };
    struct RoundExit {
        NodeId node = 0;
        uint64_t ack_seq = 0;
        Value val = 0;
    };

    void note(const std::string& what);
    Value predicted_after_round(const NodeTrack& t, uint64_t round) const;

    uint32_t n_ = 0;
    std::vector<Value> inputs_;
    std::vector<NodeTrack> nodes_;
    std::vector<uint8_t> crashed_;
    std::map<std::pair<uint64_t, NodeId>, RoundBroadcast> round_broadcasts_; // (round, sender)
    std::map<uint64_t, std::vector<RoundExit>> round_exits_;
    std::map<uint64_t, uint32_t> active_per_round_;

    bool adoption_ok_ = true;
    bool min_rank_ok_ = true;
    bool validity_ok_ = true;
    uint64_t min_rank_rounds_checked_ = 0;
    std::vector<std::string> violations_;
};

} // namespace macsim
