#include "dtmec/baselines.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>
#include <utility>

namespace dtmec::baselines {

namespace {

constexpr std::array<std::pair<PolicyKind, const char*>, 7> kNames = {{
    {PolicyKind::kNearestBsFixedPower, "nearest-bs-fixed-power"},
    {PolicyKind::kNearestBsRandomPower, "nearest-bs-random-power"},
    {PolicyKind::kEqualComputeSplit, "equal-compute-split"},
    {PolicyKind::kProportionalComputeSplit, "proportional-compute-split"},
    {PolicyKind::kNearestDeployment, "nearest-deployment"},
    {PolicyKind::kStickyDeployment, "sticky-deployment"},
    {PolicyKind::kRandomAll, "random-all"},
}};

double unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::size_t pick(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

env::MuAction nearest_bs(const env::MuObservation& obs, double power) {
  return {nearest_index(obs.position, obs.bs_positions), power};
}

// Requesting MUs hosted here split the unit budget by `weight`. Requesting MUs
// hosted elsewhere get the same per-MU share so that a placement change landing
// them here at a frame boundary still receives cycles; the environment rescales
// any oversubscription.
template <typename Weight>
std::vector<double> split_compute(const env::BsObservation& obs, Weight weight) {
  double hosted_total = 0.0;
  for (const auto& v : obs.mus) {
    if (v.requesting && v.hosted) hosted_total += weight(v);
  }
  std::vector<double> out(obs.mus.size(), 0.0);
  for (std::size_t k = 0; k < obs.mus.size(); ++k) {
    const auto& v = obs.mus[k];
    if (!v.requesting) continue;
    const double w = weight(v);
    out[k] = hosted_total > 0.0 ? std::min(1.0, w / hosted_total) : 1.0;
  }
  return out;
}

// Equal share per relay target among the served MUs relayed there; full weight
// for the rest, which only matters if the placement changes underneath them.
// Full weight for every requesting MU: the link projection then splits each
// relay link equally. Served and relay flags lag one slot, so they are ignored.
std::vector<double> split_wired(const env::BsObservation& obs) {
  std::vector<double> out(obs.mus.size(), 0.0);
  for (std::size_t k = 0; k < obs.mus.size(); ++k) {
    if (obs.mus[k].requesting) out[k] = 1.0;
  }
  return out;
}

env::AgentAction random_action(const env::AgentObservation& obs, Rng& rng) {
  if (const auto* mu = std::get_if<env::MuObservation>(&obs)) {
    const std::size_t bs = pick(mu->bs_positions.size(), rng);
    return env::MuAction{bs, unit(rng)};
  }
  if (const auto* bs = std::get_if<env::BsObservation>(&obs)) {
    env::BsAction a;
    a.compute.resize(bs->mus.size());
    a.wired.resize(bs->mus.size());
    for (double& v : a.compute) v = unit(rng);
    for (double& v : a.wired) v = unit(rng);
    return a;
  }
  const auto& cc = std::get<env::CenterObservation>(obs);
  env::CenterAction a;
  a.deployment.resize(cc.mu_positions.size());
  for (auto& b : a.deployment) b = pick(cc.bs_positions.size(), rng);
  return a;
}

}  // namespace

const char* to_string(PolicyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind policy_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

bool applies_to(PolicyKind kind, env::AgentKind agent) {
  switch (kind) {
    case PolicyKind::kNearestBsFixedPower:
    case PolicyKind::kNearestBsRandomPower:
      return agent == env::AgentKind::kMu;
    case PolicyKind::kEqualComputeSplit:
    case PolicyKind::kProportionalComputeSplit:
      return agent == env::AgentKind::kBs;
    case PolicyKind::kNearestDeployment:
    case PolicyKind::kStickyDeployment:
      return agent == env::AgentKind::kCenter;
    case PolicyKind::kRandomAll:
      return true;
  }
  return false;
}

env::AgentAction act(PolicyKind kind, const env::AgentObservation& obs, Rng& rng) {
  const env::AgentKind agent = env::kind_of(obs);
  if (!applies_to(kind, agent)) {
    throw std::invalid_argument(std::string("policy ") + to_string(kind) + " cannot drive a " +
                                env::to_string(agent) + " agent");
  }
  switch (kind) {
    case PolicyKind::kNearestBsFixedPower:
      return nearest_bs(std::get<env::MuObservation>(obs), kFixedPowerRaw);
    case PolicyKind::kNearestBsRandomPower: {
      const auto& mu = std::get<env::MuObservation>(obs);
      return nearest_bs(mu, unit(rng));
    }
    case PolicyKind::kEqualComputeSplit: {
      const auto& bs = std::get<env::BsObservation>(obs);
      return env::BsAction{split_compute(bs, [](const env::BsMuView&) { return 1.0; }),
                           split_wired(bs)};
    }
    case PolicyKind::kProportionalComputeSplit: {
      const auto& bs = std::get<env::BsObservation>(obs);
      auto demand = [](const env::BsMuView& v) {
        return v.request.data_bits * v.request.cycles_per_bit;
      };
      return env::BsAction{split_compute(bs, demand), split_wired(bs)};
    }
    case PolicyKind::kNearestDeployment: {
      const auto& cc = std::get<env::CenterObservation>(obs);
      env::CenterAction a;
      a.deployment.reserve(cc.mu_positions.size());
      for (const Vec2& p : cc.mu_positions) a.deployment.push_back(nearest_index(p, cc.bs_positions));
      return a;
    }
    case PolicyKind::kStickyDeployment:
      return env::CenterAction{std::get<env::CenterObservation>(obs).deployment};
    case PolicyKind::kRandomAll:
      return random_action(obs, rng);
  }
  throw std::logic_error("unhandled policy kind");
}

void PolicyAssignment::validate() const {
  if (!applies_to(mu, env::AgentKind::kMu)) {
    throw std::invalid_argument(std::string("policy ") + to_string(mu) + " is not an MU policy");
  }
  if (!applies_to(bs, env::AgentKind::kBs)) {
    throw std::invalid_argument(std::string("policy ") + to_string(bs) + " is not a BS policy");
  }
  if (!applies_to(center, env::AgentKind::kCenter)) {
    throw std::invalid_argument(std::string("policy ") + to_string(center) +
                                " is not a centre policy");
  }
}

std::string PolicyAssignment::describe() const {
  return std::string(to_string(mu)) + "/" + to_string(bs) + "/" + to_string(center);
}

std::vector<env::AgentAction> act_all(const PolicyAssignment& policies,
                                      const std::vector<env::AgentObservation>& observations,
                                      Rng& rng) {
  std::vector<env::AgentAction> actions;
  actions.reserve(observations.size());
  for (const auto& obs : observations) {
    switch (env::kind_of(obs)) {
      case env::AgentKind::kMu:
        actions.push_back(act(policies.mu, obs, rng));
        break;
      case env::AgentKind::kBs:
        actions.push_back(act(policies.bs, obs, rng));
        break;
      case env::AgentKind::kCenter:
        actions.push_back(act(policies.center, obs, rng));
        break;
    }
  }
  return actions;
}

}  // namespace dtmec::baselines
