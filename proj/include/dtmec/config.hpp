#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtmec/dtsync.hpp"
#include "dtmec/mobility.hpp"
#include "dtmec/radio.hpp"
#include "dtmec/types.hpp"

namespace dtmec {

/// Raised for unreadable, malformed or out-of-range configuration. `key()`
/// holds the dotted path of the offending entry when one applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Everything a run depends on. Power-like quantities are stored linear;
/// the file format carries them in dB (ref_gain_db, noise_power_dbw).
struct NetworkConfig {
  // Topology and timing.
  std::int64_t num_mus = 30;
  std::int64_t num_bs = 5;
  std::int64_t frame_length = 100;  // T, slots per frame
  std::int64_t num_frames = 50;     // Q
  double slot_length = 0.05;        // s
  double area_width = 1000.0;       // m
  /// Optional explicit BS coordinates; empty means the default grid layout.
  std::vector<Vec2> bs_positions;

  // Radio.
  double bandwidth = 10e6;          // Hz
  double wired_capacity = 10e6;     // bit/s per ordered BS pair
  double max_power = 0.5;           // W
  double ref_gain = 1e-3;           // linear (-30 dB)
  double path_loss_exponent = 2.0;
  double rician_factor = 10.0;
  double noise_power = 1e-9;        // W (-90 dBW)

  // Compute and requests.
  double max_cpu_hz = 10e9;
  double request_prob = 0.5;
  double data_bits_min = 15e3;
  double data_bits_max = 25e3;
  double cycles_per_bit_min = 550.0;
  double cycles_per_bit_max = 700.0;
  double deadline_min_frac = 0.5;
  double deadline_max_frac = 1.0;

  // Migration.
  std::int64_t migration_slots = 10;  // G

  // Mobility.
  double mean_speed_min = 2.0;
  double mean_speed_max = 10.0;
  double mean_heading = 0.0;
  double speed_memory = 0.8;
  double heading_memory = 0.8;
  double speed_noise_mean = 0.0;
  double speed_noise_std = 1.0;
  double heading_noise_mean = 0.0;
  double heading_noise_std = 0.5;
  mobility::BoundaryMode boundary = mobility::BoundaryMode::kReflect;

  // Reliability and reward.
  double epsilon = 0.2;
  double eta = 1.0;
  double reward_scale = 100.0;  // nu

  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  std::size_t mus() const { return static_cast<std::size_t>(num_mus); }
  std::size_t bss() const { return static_cast<std::size_t>(num_bs); }
  std::size_t num_agents() const { return mus() + bss() + 1; }
  std::int64_t episode_slots() const { return frame_length * num_frames; }
  /// Q*K*T, the energy normalizer of the per-slot cost.
  double cost_normalizer() const {
    return static_cast<double>(num_frames) * static_cast<double>(num_mus) *
           static_cast<double>(frame_length);
  }

  radio::ChannelParams channel_params() const;
  dtsync::RequestParams request_params() const;
  /// Shared mobility parameters; mean_speed is filled per MU at reset.
  mobility::MobilityParams mobility_params() const;
  /// Explicit positions if configured, otherwise the default layout.
  std::vector<Vec2> resolved_bs_positions() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// BS i at the centre of cell i of a ceil(sqrt(M))-column grid over the area.
std::vector<Vec2> grid_bs_positions(std::size_t num_bs, double area_width);

/// Starts from defaults, overrides every key present, rejects unknown keys.
NetworkConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const NetworkConfig& cfg);
NetworkConfig load_config(const std::filesystem::path& path);

}  // namespace dtmec
