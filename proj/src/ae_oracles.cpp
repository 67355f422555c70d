#include "macsim/ae_oracles.hpp"

#include <algorithm>

namespace macsim {

AeTraceChecker::AeTraceChecker(uint32_t n, std::vector<Value> inputs)
    : n_(n), inputs_(std::move(inputs)) {
    nodes_.resize(n);
    crashed_.assign(n, 0);
}

void AeTraceChecker::note(const std::string& what) { violations_.push_back(what); }

Value AeTraceChecker::predicted_after_round(const NodeTrack& t, uint64_t round) const {
    const ReceivedMsg* best = nullptr;
    for (const ReceivedMsg& m : t.received) {
        if (m.round != round || m.infinite || !m.in_phase_two) continue;
        if (!t.cur_infinite && m.rank >= t.cur_rank) continue;
        if (!best || m.rank < best->rank || (m.rank == best->rank && m.sender < best->sender))
            best = &m;
    }
    return best ? best->val : t.cur_val;
}

void AeTraceChecker::feed(const TraceEvent& e) {
    NodeTrack& t = nodes_[e.node];
    switch (e.kind) {
        case EventKind::Init:
            break;

        case EventKind::Recv: {
            if (!e.payload) break;
            if (const auto* rd = std::get_if<AeRound>(&*e.payload)) {
                if (!t.decided)
                    t.received.push_back({rd->round, rd->rank, rd->infinite, rd->val, *e.from,
                                          t.phase2});
            }
            break;
        }

        case EventKind::Ack: {
            if (!e.payload) break;
            if (std::holds_alternative<AePhase1>(*e.payload)) {
                t.phase2 = true;
                if (!e.combined || !e.bcast_payload ||
                    !std::holds_alternative<AeRound>(*e.bcast_payload)) {
                    adoption_ok_ = false;
                    note("phase-1 ack without a round-1 broadcast at node " +
                         std::to_string(e.node));
                    break;
                }
            } else if (const auto* rd = std::get_if<AeRound>(&*e.payload)) {
                if (!t.cur_round || *t.cur_round != rd->round) {
                    adoption_ok_ = false;
                    note("ack of a round broadcast that is not the outstanding one at node " +
                         std::to_string(e.node));
                    break;
                }
                auto it = round_broadcasts_.find({rd->round, e.node});
                if (it != round_broadcasts_.end()) it->second.ack_seq = e.seq;

                const Value predicted = predicted_after_round(t, rd->round);
                round_exits_[rd->round].push_back({e.node, e.seq, predicted});
                t.cur_val = predicted;
                t.cur_round.reset();

                if (!e.combined) {
                    t.decided = predicted;
                    if (std::find(inputs_.begin(), inputs_.end(), predicted) == inputs_.end()) {
                        validity_ok_ = false;
                        note("decided value does not match any input");
                    }
                    break;
                }
            } else {
                break; // not an a.e. payload
            }

            // A combined ack opens the next round.
            if (e.combined && e.bcast_payload) {
                const auto* nb = std::get_if<AeRound>(&*e.bcast_payload);
                if (!nb) {
                    adoption_ok_ = false;
                    note("round ack combined with a non-round broadcast");
                    break;
                }
                const uint64_t expect =
                    std::holds_alternative<AePhase1>(*e.payload) ? 1 : 0;
                if (expect == 1 && nb->round != 1) {
                    adoption_ok_ = false;
                    note("first round broadcast not tagged 1");
                }
                if (expect == 0) {
                    const auto* prev = std::get_if<AeRound>(&*e.payload);
                    if (nb->round != prev->round + 1) {
                        adoption_ok_ = false;
                        note("round tags not consecutive at node " + std::to_string(e.node));
                    }
                    if (nb->val != t.cur_val) {
                        adoption_ok_ = false;
                        note("node " + std::to_string(e.node) + " carried value " +
                             std::to_string(nb->val) + " into round " + std::to_string(nb->round) +
                             ", adoption rule predicts " + std::to_string(t.cur_val));
                    }
                }
                if (std::find(inputs_.begin(), inputs_.end(), nb->val) == inputs_.end()) {
                    validity_ok_ = false;
                    note("broadcast value does not match any input");
                }
                t.cur_round = nb->round;
                t.cur_rank = nb->rank;
                t.cur_infinite = nb->infinite;
                t.cur_val = nb->val;
                round_broadcasts_[{nb->round, e.node}] =
                    RoundBroadcast{e.node, nb->rank, nb->infinite, nb->val, e.seq, std::nullopt};
                if (!nb->infinite) active_per_round_[nb->round] += 1;
            }
            break;
        }

        case EventKind::Crash:
            crashed_[e.node] = 1;
            break;
    }
}

void AeTraceChecker::finish() {
    // Minimum-rank propagation, per round.
    std::map<uint64_t, std::vector<const RoundBroadcast*>> per_round;
    for (const auto& [key, rb] : round_broadcasts_) per_round[key.first].push_back(&rb);

    for (const auto& [round, bcasts] : per_round) {
        const RoundBroadcast* earliest = nullptr;
        for (const auto* rb : bcasts)
            if (rb->ack_seq && (!earliest || *rb->ack_seq < *earliest->ack_seq)) earliest = rb;
        if (!earliest || earliest->infinite) continue;
        bool unique_min = true;
        for (const auto* rb : bcasts) {
            if (rb == earliest || rb->infinite) continue;
            if (rb->rank <= earliest->rank) {
                unique_min = false;
                break;
            }
        }
        if (!unique_min) continue;

        auto exits = round_exits_.find(round);
        if (exits == round_exits_.end()) continue;

        // Premise: every later-acking node saw the earliest node's message
        // after entering phase two (an arbitrary scheduler can starve a
        // node in phase one past this round; such rounds are skipped).
        bool visible_everywhere = true;
        for (const RoundExit& exit : exits->second) {
            if (exit.node == earliest->sender) continue;
            const NodeTrack& t = nodes_[exit.node];
            const bool saw = std::any_of(t.received.begin(), t.received.end(), [&](const auto& m) {
                return m.round == round && m.sender == earliest->sender && m.in_phase_two;
            });
            if (!saw) {
                visible_everywhere = false;
                break;
            }
        }
        if (!visible_everywhere) continue;

        min_rank_rounds_checked_ += 1;
        for (const RoundExit& exit : exits->second) {
            if (exit.val != earliest->val) {
                min_rank_ok_ = false;
                note("round " + std::to_string(round) + ": node " + std::to_string(exit.node) +
                     " exited with value " + std::to_string(exit.val) +
                     " instead of the minimum-rank holder's " + std::to_string(earliest->val));
            }
        }
    }
}

} // namespace macsim
