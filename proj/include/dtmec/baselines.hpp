#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dtmec/agent_io.hpp"
#include "dtmec/types.hpp"

namespace dtmec::baselines {

/// Heuristic policies. MU kinds: kNearestBsFixedPower, kNearestBsRandomPower.
/// BS kinds: kEqualComputeSplit, kProportionalComputeSplit. Centre kinds:
/// kNearestDeployment, kStickyDeployment. kRandomAll fits every agent class.
enum class PolicyKind {
  kNearestBsFixedPower,
  kNearestBsRandomPower,
  kEqualComputeSplit,
  kProportionalComputeSplit,
  kNearestDeployment,
  kStickyDeployment,
  kRandomAll,
};

const char* to_string(PolicyKind kind);
/// Accepts the names printed by to_string; std::invalid_argument otherwise.
PolicyKind policy_from_string(std::string_view name);

bool applies_to(PolicyKind kind, env::AgentKind agent);

/// Raw power used by the fixed-power MU policy (half of P^max).
inline constexpr double kFixedPowerRaw = 0.5;

/// Throws std::invalid_argument when `kind` does not apply to the observation's agent class.
env::AgentAction act(PolicyKind kind, const env::AgentObservation& obs, Rng& rng);

struct PolicyAssignment {
  PolicyKind mu = PolicyKind::kNearestBsFixedPower;
  PolicyKind bs = PolicyKind::kEqualComputeSplit;
  PolicyKind center = PolicyKind::kNearestDeployment;

  void validate() const;
  std::string describe() const;
};

std::vector<env::AgentAction> act_all(const PolicyAssignment& policies,
                                      const std::vector<env::AgentObservation>& observations,
                                      Rng& rng);

}  // namespace dtmec::baselines
