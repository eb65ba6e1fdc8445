#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "dtmec/dtsync.hpp"
#include "dtmec/radio.hpp"
#include "dtmec/types.hpp"

namespace dtmec::env {

/// Agent ordering on every interface: MUs 0..K-1, BSs K..K+M-1, control centre K+M.
enum class AgentKind { kMu, kBs, kCenter };

const char* to_string(AgentKind kind);

/// MU k sees itself, the BS layout and its own request only.
struct MuObservation {
  std::size_t index = 0;
  Vec2 position;
  std::vector<Vec2> bs_positions;
  dtsync::SyncRequest request;
};

/// What BS m knows about one MU. Every field stays zero unless the MU is requesting.
struct BsMuView {
  bool requesting = false;
  bool served = false;  // latest association points at this BS
  bool hosted = false;  // the MU's DT lives on this BS's server
  Vec2 position;
  dtsync::SyncRequest request;
  std::vector<unsigned char> relay;  // relay flag towards each server j
};

struct BsObservation {
  std::size_t index = 0;
  std::vector<Vec2> bs_positions;
  std::vector<BsMuView> mus;
};

struct CenterObservation {
  double frame_phase = 0.0;  // (n mod T) / T
  radio::Association association;
  std::vector<Vec2> bs_positions;
  std::vector<Vec2> mu_positions;
  std::vector<std::size_t> deployment;
};

using AgentObservation = std::variant<MuObservation, BsObservation, CenterObservation>;

AgentKind kind_of(const AgentObservation& obs);

/// Divisors mapping raw observation fields into [0, 1].
struct ObservationScale {
  std::size_t num_mus = 1;
  std::size_t num_bs = 1;
  double area_width = 1.0;
  double data_bits_max = 1.0;
  double cycles_per_bit_max = 1.0;
  double slot_length = 1.0;
};

std::size_t observation_dim(AgentKind kind, std::size_t num_mus, std::size_t num_bs);

/// Fixed-length normalized vector; layout is documented in README.md.
std::vector<double> flatten(const AgentObservation& obs, const ObservationScale& scale);

/// Raw continuous outputs live in [0, 1]; discrete heads carry indices.
struct MuAction {
  std::size_t bs = 0;
  double power = 0.0;
};

/// Per-MU weights indexed by MU. `compute[k]` applies when this BS hosts k's DT,
/// `wired[k]` when k is associated here and its DT lives elsewhere.
struct BsAction {
  std::vector<double> compute;
  std::vector<double> wired;
};

struct CenterAction {
  std::vector<std::size_t> deployment;
};

using AgentAction = std::variant<MuAction, BsAction, CenterAction>;

AgentKind kind_of(const AgentAction& action);

/// Affine map of raw in [0, 1] onto [low, high]. Throws std::out_of_range otherwise.
double scale_action(double raw, double low, double high);

/// Index of the largest score; ties resolve to the lowest index.
std::size_t argmax_index(std::span<const double> scores);

struct AgentSpace {
  AgentKind kind = AgentKind::kMu;
  std::size_t obs_dim = 0;
  std::vector<std::size_t> discrete;  // category count per discrete head
  std::size_t continuous = 0;         // number of [0, 1] dimensions
};

std::vector<AgentSpace> agent_spaces(std::size_t num_mus, std::size_t num_bs);

}  // namespace dtmec::env
