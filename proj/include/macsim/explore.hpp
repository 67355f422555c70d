#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "macsim/cr_oracles.hpp"
#include "macsim/trace.hpp"
#include "macsim/world.hpp"

namespace macsim {

/// Bounds refused up front because the work estimate is out of budget.
struct ExploreRefused : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExploreConfig {
    uint32_t n = 2;
    ProtocolKind protocol = ProtocolKind::CounterRace;
    std::vector<Value> inputs;
    uint64_t depth = 20;        // scheduler choices per trace
    size_t tape_bound = 8;      // coin draws per node
    int64_t crash_budget = -1;  // -1: n-1, like live worlds
    ProtocolParams params;
};

struct ExploreVerdict {
    bool passed = true;
    uint64_t drained_traces = 0;   // schedules that drained every recv/ack
    uint64_t maximal_traces = 0;   // cut off by depth or tape bound instead
    uint64_t distinct_states = 0;
    uint64_t events_applied = 0;
    std::vector<std::string> violations;
    std::optional<Trace> counterexample; // minimal-prefix failing schedule
};

/// Visits every world reachable by legal scheduler choices of length <=
/// depth crossed with every per-node coin tape of length <= tape_bound.
/// Coin draws fork lazily, so traces differing only in unconsumed tape
/// bits are never duplicated; revisited states (hashed with their tape
/// positions) are pruned when no extra budget remains.
///
/// Checked along every explored edge: agreement, validity, the counter
/// increment property, domination monotonicity, first-decide domination
/// and (for ID generation) pairwise distinctness of adopted IDs.
///
/// `on_trace`, when set, receives each yielded schedule with a flag for
/// whether it drained.
ExploreVerdict explore_schedules(
    const ExploreConfig& config,
    const std::function<void(const std::vector<TraceEvent>&, bool drained)>& on_trace = nullptr);

} // namespace macsim
