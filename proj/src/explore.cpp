#include "macsim/explore.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "macsim/rng.hpp"

namespace macsim {

namespace {

// Order-sensitive 128-bit accumulator over the canonical state encoding.
struct Hasher {
    uint64_t a = 0x243f6a8885a308d3ull;
    uint64_t b = 0x13198a2e03707344ull;
    void u64(uint64_t x) {
        a = mix64(a ^ x);
        b = mix64(b + (x ^ 0x452821e638d01377ull));
    }
    void boolean(bool x) { u64(x ? 0x9d : 0x4a); }
    void str(const std::string& s) {
        u64(s.size());
        for (char ch : s) u64(static_cast<unsigned char>(ch));
    }
};

void hash_payload(Hasher& h, const Payload& p) {
    h.u64(p.index());
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CrCounter>) {
                h.u64(m.id.hash_key());
                h.u64(m.c);
                h.u64(m.v);
                h.u64(m.n_est);
            } else if constexpr (std::is_same_v<T, CrNop>) {
                h.u64(m.id.hash_key());
                h.u64(m.n_est);
            } else if constexpr (std::is_same_v<T, CrDecide>) {
                h.u64(m.v);
            } else if constexpr (std::is_same_v<T, IdBits>) {
                h.str(m.bits);
            } else if constexpr (std::is_same_v<T, AePhase1>) {
                h.u64(m.x);
            } else {
                h.u64(m.round);
                h.u64(m.rank);
                h.boolean(m.infinite);
                h.u64(static_cast<uint64_t>(m.val));
            }
        },
        p);
}

void hash_cr(Hasher& h, const CounterRaceState& s) {
    h.u64(s.id.hash_key());
    h.u64(s.v);
    h.u64(s.c);
    h.u64(s.n_est);
    h.u64(s.peers.size());
    for (const auto& t : s.peers) h.u64(t.hash_key());
    h.u64(s.records.size());
    for (const auto& [t, rec] : s.records) {
        h.u64(t.hash_key());
        h.u64(rec.first);
        h.u64(rec.second);
    }
    h.u64(s.phase);
    h.boolean(s.active);
    h.u64(s.decide_latch ? *s.decide_latch + 1 : 0);
    h.u64(s.decided ? *s.decided + 1 : 0);
}

void hash_idgen(Hasher& h, const IdGenState& s) {
    h.str(s.bits);
    h.u64(s.seen.size());
    for (const auto& b : s.seen) h.str(b);
    h.boolean(s.adopted.has_value());
    if (s.adopted) h.str(*s.adopted);
}

void hash_node_state(Hasher& h, const NodeState& s) {
    h.u64(s.index());
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, CounterRaceState>) {
                hash_cr(h, st);
            } else if constexpr (std::is_same_v<T, ComposedState>) {
                h.u64(st.input);
                hash_idgen(h, st.idgen);
                h.u64(st.buffered.size());
                for (const auto& p : st.buffered) hash_payload(h, p);
                h.boolean(st.race.has_value());
                if (st.race) hash_cr(h, *st.race);
            } else if constexpr (std::is_same_v<T, IdGenState>) {
                hash_idgen(h, st);
            } else {
                h.u64(0); // a.e. agreement is never explored (needs range draws)
            }
        },
        s);
}

struct PathNode {
    WorldState world;
    CrTraceAnalyzer analyzer;

    PathNode(WorldState w, CrTraceAnalyzer a) : world(std::move(w)), analyzer(std::move(a)) {}
};

// The key covers the world plus the analyzer's history digest: the trace
// oracles (increment property, domination, clean groups) are functions of
// sent-or-received history, so two paths reaching the same world but with
// different digests must both stay explorable.
std::pair<uint64_t, uint64_t> fingerprint(const WorldState& w, const CrTraceAnalyzer& an) {
    Hasher h;
    h.u64(w.n());
    h.u64(w.crash_budget_remaining());
    for (NodeId v = 0; v < w.n(); ++v) {
        const auto& slot = w.nodes()[v];
        h.boolean(slot.inited);
        h.boolean(slot.halted);
        h.boolean(w.crashed()[v] != 0);
        if (slot.inited) hash_node_state(h, slot.state);
        const auto& src = w.tapes()[v];
        h.u64(src.is_tape() ? src.tape().pos : 0);
        h.u64(an.seen_mask(v, 0));
        h.u64(an.seen_mask(v, 1));
        h.u64(an.group_flags(v));
    }
    h.boolean(an.saw_decide_broadcast());
    h.u64(w.pending().size());
    for (const auto& b : w.pending()) {
        h.u64(b.sender);
        hash_payload(h, b.stored);
        uint64_t mask = 0;
        for (NodeId u : b.undelivered) mask |= uint64_t{1} << u;
        h.u64(mask);
        h.boolean(b.ack_pending);
    }
    return {h.a, h.b};
}

// Open-addressed (fingerprint -> best remaining budget) table.
class VisitedTable {
public:
    VisitedTable() : slots_(1 << 16) {}

    /// True when the state still needs exploring at this budget.
    bool admit(uint64_t a, uint64_t b, uint8_t budget) {
        if (count_ * 5 > slots_.size() * 3) grow();
        size_t i = index_of(a, b);
        while (slots_[i].used) {
            if (slots_[i].a == a && slots_[i].b == b) {
                if (slots_[i].budget >= budget) return false;
                slots_[i].budget = budget;
                return true;
            }
            i = (i + 1) & (slots_.size() - 1);
        }
        slots_[i] = {a, b, budget, true};
        count_ += 1;
        return true;
    }

    uint64_t size() const { return count_; }

private:
    struct Slot {
        uint64_t a = 0, b = 0;
        uint8_t budget = 0;
        bool used = false;
    };

    size_t index_of(uint64_t a, uint64_t b) const {
        return static_cast<size_t>(mix64(a ^ (b * 0x9e3779b97f4a7c15ull))) & (slots_.size() - 1);
    }

    void grow() {
        std::vector<Slot> old;
        old.swap(slots_);
        slots_.resize(old.size() * 2);
        for (const Slot& s : old) {
            if (!s.used) continue;
            size_t i = index_of(s.a, s.b);
            while (slots_[i].used) i = (i + 1) & (slots_.size() - 1);
            slots_[i] = s;
        }
    }

    std::vector<Slot> slots_;
    size_t count_ = 0;
};

struct ViolationFound {
    std::string what;
};

class Explorer {
public:
    Explorer(const ExploreConfig& config,
             const std::function<void(const std::vector<TraceEvent>&, bool)>& on_trace)
        : config_(config), on_trace_(on_trace) {}

    ExploreVerdict run() {
        WorldOptions opts;
        opts.record_trace = false;
        opts.retain_view_history = false;
        opts.max_crashes = config_.crash_budget;
        WorldState root(config_.n, config_.protocol, config_.inputs, 0, config_.params, opts);
        root.use_tapes(config_.tape_bound);
        const bool group_oracle = config_.protocol == ProtocolKind::CounterRace;
        try {
            dfs(PathNode{std::move(root), CrTraceAnalyzer(config_.n, group_oracle)},
                static_cast<uint8_t>(config_.depth));
        } catch (const ViolationFound& v) {
            verdict_.passed = false;
            verdict_.violations.push_back(v.what);
            Trace cex;
            cex.header = TraceHeader{config_.n, to_string(config_.protocol), config_.inputs, 0,
                                     "exhaustive"};
            cex.events = path_;
            verdict_.counterexample = std::move(cex);
        }
        verdict_.distinct_states = visited_.size();
        return verdict_;
    }

private:
    void yield(const PathNode& node, bool drained) {
        if (drained)
            verdict_.drained_traces += 1;
        else
            verdict_.maximal_traces += 1;
        if (on_trace_) on_trace_(path_, drained);
        (void)node;
    }

    void check_edge(const PathNode& node, const TraceEvent& ev) {
        const auto& an = node.analyzer;
        if (!an.violations().empty()) throw ViolationFound{an.violations().front()};
        if (ev.kind == EventKind::Ack && ev.payload &&
            std::holds_alternative<CrDecide>(*ev.payload)) {
            if (!an.agreement_ok()) throw ViolationFound{"agreement violated"};
            if (!an.validity_ok(config_.inputs)) throw ViolationFound{"validity violated"};
        }
        if (config_.protocol == ProtocolKind::IdGen ||
            config_.protocol == ProtocolKind::CounterRaceIdGen) {
            std::set<std::string> adopted;
            for (const auto& slot : node.world.nodes()) {
                const std::string* bits = nullptr;
                if (const auto* idg = std::get_if<IdGenState>(&slot.state)) {
                    if (idg->adopted) bits = &*idg->adopted;
                } else if (const auto* comp = std::get_if<ComposedState>(&slot.state)) {
                    if (comp->idgen.adopted) bits = &*comp->idgen.adopted;
                }
                if (bits && !adopted.insert(*bits).second)
                    throw ViolationFound{"two nodes adopted ID " + *bits};
            }
        }
    }

    void dfs(PathNode node, uint8_t budget) {
        const auto [fa, fb] = fingerprint(node.world, node.analyzer);
        if (!visited_.admit(fa, fb, budget)) return;

        const std::vector<Event> enabled = node.world.enabled_events();
        const bool drained = !node.world.any_protocol_event_enabled();
        if (drained || budget == 0) {
            yield(node, drained);
            return;
        }

        for (const Event& e : enabled) {
            // Each attempt re-copies the parent; a coin draw past the fixed
            // prefix aborts the attempt and forks it on both bit values.
            std::vector<std::vector<uint8_t>> extensions{{}};
            while (!extensions.empty()) {
                std::vector<uint8_t> ext = std::move(extensions.back());
                extensions.pop_back();
                PathNode child = node;
                auto& tape = child.world.tapes()[e.node].tape();
                tape.prefix.insert(tape.prefix.end(), ext.begin(), ext.end());
                TraceEvent ev;
                try {
                    ev = child.world.apply_event(e);
                } catch (const TapeNeedsBit&) {
                    std::vector<uint8_t> with0 = ext;
                    with0.push_back(0);
                    std::vector<uint8_t> with1 = std::move(ext);
                    with1.push_back(1);
                    extensions.push_back(std::move(with1));
                    extensions.push_back(std::move(with0));
                    continue;
                } catch (const TapeExhausted&) {
                    continue; // beyond the coin budget; branch abandoned
                }
                verdict_.events_applied += 1;
                ev.seq = path_.size();
                child.analyzer.feed(ev);
                path_.push_back(ev);
                check_edge(child, ev);
                dfs(std::move(child), budget - 1);
                path_.pop_back();
            }
        }
    }

    ExploreConfig config_;
    const std::function<void(const std::vector<TraceEvent>&, bool)>& on_trace_;
    ExploreVerdict verdict_;
    VisitedTable visited_;
    std::vector<TraceEvent> path_;
};

} // namespace

ExploreVerdict explore_schedules(
    const ExploreConfig& config,
    const std::function<void(const std::vector<TraceEvent>&, bool drained)>& on_trace) {
    if (config.protocol == ProtocolKind::AeAgreement)
        throw ExploreRefused("a.e. agreement draws ranks from polynomial ranges; "
                             "bit-tape enumeration does not cover it");
    if (config.n > 3) {
        const double log10_estimate =
            config.depth * std::log10(static_cast<double>(config.n) * (config.n + 2));
        throw ExploreRefused("enumeration bounded to n <= 3; estimated ~10^" +
                             std::to_string(static_cast<int>(log10_estimate)) + " traces");
    }
    if (config.depth > 64 || config.tape_bound > 24)
        throw ExploreRefused("bounds exceed the enumeration budget (depth <= 64, tape <= 24)");
    if (config.inputs.size() != config.n) throw ConfigError("input arity must match node count");
    Explorer ex(config, on_trace);
    return ex.run();
}

} // namespace macsim
