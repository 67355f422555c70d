#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "macsim/rng.hpp"
#include "macsim/world.hpp"

namespace macsim {

enum class PolicyKind : uint8_t {
    UniformRandom,
    SynchronousLayers,
    AdversarialDelay,
    Exhaustive, // marker only; exploration runs through explore.hpp
};

std::string to_string(PolicyKind k);
PolicyKind policy_kind_from_string(const std::string& s);

enum class CrashTarget : uint8_t { Random, Targeted };

struct PolicyConfig {
    PolicyKind kind = PolicyKind::UniformRandom;
    uint64_t seed = 0;
    double crash_p = 0.0;       // per-step crash probability, injector active when > 0
    int64_t crash_budget = 0;   // crashes the injector may spend
    CrashTarget crash_target = CrashTarget::Random;

    std::string label() const;
};

/// Message-oblivious scheduling policy: a decision function over the
/// redacted view plus a private random stream. Cursor state is itself a
/// function of the visible history, so decisions never depend on payload
/// contents.
class Policy {
public:
    explicit Policy(const PolicyConfig& config);

    /// Picks the next event from view.enabled. Requires at least one
    /// non-crash event; crash choices are only ever taken by the injector.
    Event choose(const SchedulerView& view);

    const PolicyConfig& config() const { return config_; }

private:
    Event base_choice(const SchedulerView& view);

    PolicyConfig config_;
    Prng rng_;
    int64_t crashes_left_ = 0;
    NodeId recv_cursor_ = 0;
    NodeId ack_cursor_ = 0;
};

} // namespace macsim
