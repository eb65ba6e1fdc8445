#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "dtmec/baselines.hpp"
#include "dtmec/config.hpp"
#include "dtmec/lyapunov.hpp"
#include "dtmec/metrics.hpp"

namespace dtmec::harness {

struct EpisodeSummary {
  std::int64_t episode = 0;
  std::uint64_t seed = 0;
  std::int64_t slots = 0;
  std::int64_t requests = 0;
  std::int64_t failures = 0;
  double total_energy = 0.0;
  double average_energy = 0.0;  // sum E / (Q K T)
  double failure_ratio = 0.0;   // sum X / (Q K T)
  double mean_backlog = 0.0;
  double max_final_backlog = 0.0;
  double mean_reward_global = 0.0;
  double mean_reward_center = 0.0;
  std::int64_t deployment_changes = 0;
  lyapunov::DriftBoundReport drift_check;
};

/// Optional per-slot sinks; null pointers are skipped.
struct EpisodeSinks {
  SlotCsvWriter* csv = nullptr;
  SlotJsonlWriter* jsonl = nullptr;
};

/// Seed of the policy RNG for an episode seed. Kept apart from the environment
/// stream so policies never perturb the simulated world.
std::uint64_t policy_seed(std::uint64_t seed);

EpisodeSummary run_episode(const NetworkConfig& config, const baselines::PolicyAssignment& policies,
                           std::uint64_t seed, std::int64_t episode = 0,
                           const EpisodeSinks& sinks = {});

/// Episodes 0..n-1 with seeds seed, seed+1, ...; writes slots.csv, slots.jsonl
/// and summary.csv under `out_dir` when it is non-empty.
std::vector<EpisodeSummary> run_episodes(const NetworkConfig& config,
                                         const baselines::PolicyAssignment& policies,
                                         std::uint64_t seed, std::int64_t episodes,
                                         const std::filesystem::path& out_dir);

void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const EpisodeSummary& s);

/// Copy of `config` with one numeric key (file-format name) replaced.
NetworkConfig with_override(const NetworkConfig& config, const std::string& key, double value);

struct SweepPoint {
  std::string key;
  double value = 0.0;
  std::int64_t episodes = 0;
  double average_energy = 0.0;
  double failure_ratio = 0.0;
  double mean_backlog = 0.0;
  double mean_reward_global = 0.0;
  double mean_reward_center = 0.0;
};

/// Episode means for each value of `key`.
std::vector<SweepPoint> sweep(const NetworkConfig& config,
                              const baselines::PolicyAssignment& policies, const std::string& key,
                              const std::vector<double>& values, std::uint64_t seed,
                              std::int64_t episodes);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace dtmec::harness
