#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dtmec/agent_io.hpp"
#include "dtmec/config.hpp"
#include "dtmec/dtsync.hpp"
#include "dtmec/migration.hpp"
#include "dtmec/mobility.hpp"
#include "dtmec/radio.hpp"
#include "dtmec/types.hpp"

namespace dtmec::env {

/// Everything the simulator holds between slots.
struct WorldState {
  std::vector<mobility::MobilityState> mobility;
  std::vector<mobility::MobilityParams> mobility_params;  // per MU, own mean speed
  std::vector<Vec2> bs_positions;
  std::vector<dtsync::SyncRequest> requests;  // requests of the upcoming slot
  radio::Association association;             // latest realized association
  migration::DeploymentMap deployment;
  std::vector<double> backlog;                // Y[n]
  std::vector<double> backlog_frame_start;    // Y[qT] of the current frame
  migration::TwoTimescaleClock clock{1, 1};

  std::vector<Vec2> mu_positions() const;
};

/// Realized inputs and intermediate values of one slot. Enough to recompute
/// every outcome field independently.
struct SlotTrace {
  std::vector<dtsync::SyncRequest> requests;
  radio::Association association;
  std::vector<double> power;
  std::vector<bool> blocked;
  std::vector<bool> transmitting;
  std::vector<std::size_t> deployment;
  Matrix channel_gain;  // |h|^2, K x M
  std::vector<double> sinr;
  std::vector<double> uplink_rate;
  std::vector<double> wired_rate;
  std::vector<double> compute_hz;
  std::vector<std::size_t> center_choice;
  std::vector<double> center_cost;  // r_{c,k}, seconds
  std::vector<double> backlog_frame_start;
};

struct SlotOutcome {
  std::int64_t slot = 0;
  std::int64_t frame = 0;
  std::vector<double> delay;   // t_k; 0 without a request, +inf when blocked or unreachable
  std::vector<int> failure;    // X_k
  std::vector<double> energy;  // E_k, joules
  std::vector<double> cost;    // Xi_k
  std::vector<double> backlog; // Y_k after this slot's update
  double reward_global = 0.0;  // r_g = -nu * sum Xi
  double reward_center = 0.0;  // r_c = -nu/K * sum r_{c,k}
  bool done = false;
  SlotTrace trace;
};

struct StepResult {
  std::vector<AgentObservation> observations;
  SlotOutcome outcome;
};

/// One episode of the two-timescale network. Strictly sequential; independent
/// instances share nothing.
class Environment {
 public:
  /// Throws ConfigError for an invalid configuration.
  explicit Environment(NetworkConfig config);

  std::vector<AgentObservation> reset(std::uint64_t seed);
  std::vector<AgentObservation> reset() { return reset(config_.seed); }

  /// One slot. Actions are validated in full before any state changes;
  /// std::invalid_argument on count, kind or range mismatches, std::logic_error
  /// when called before reset or after the episode ended.
  StepResult step(std::span<const AgentAction> actions);

  std::vector<AgentObservation> observations() const;
  std::vector<double> global_state() const;

  const NetworkConfig& config() const { return config_; }
  const WorldState& world() const { return world_; }
  ObservationScale observation_scale() const;
  std::vector<AgentSpace> spaces() const { return agent_spaces(config_.mus(), config_.bss()); }
  std::size_t num_agents() const { return config_.num_agents(); }
  bool done() const { return started_ && world_.clock.done(); }
  bool started() const { return started_; }

 private:
  void validate_actions(std::span<const AgentAction> actions) const;

  NetworkConfig config_;
  Rng rng_;
  WorldState world_;
  bool started_ = false;
};

/// Agent index helpers for the fixed ordering.
inline std::size_t mu_agent(std::size_t k) { return k; }
inline std::size_t bs_agent(const NetworkConfig& c, std::size_t m) { return c.mus() + m; }
inline std::size_t center_agent(const NetworkConfig& c) { return c.mus() + c.bss(); }

}  // namespace dtmec::env
