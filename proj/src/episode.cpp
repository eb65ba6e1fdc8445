#include "dtmec/episode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "dtmec/env.hpp"

namespace dtmec::harness {

std::uint64_t policy_seed(std::uint64_t seed) {
  // splitmix64 finalizer.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EpisodeSummary run_episode(const NetworkConfig& config, const baselines::PolicyAssignment& policies,
                           std::uint64_t seed, std::int64_t episode, const EpisodeSinks& sinks) {
  policies.validate();
  env::Environment environment(config);
  Rng policy_rng(policy_seed(seed));
  const std::size_t kk = config.mus();

  std::vector<env::AgentObservation> obs = environment.reset(seed);
  std::vector<lyapunov::QueueTrace> traces(kk);
  for (auto& t : traces) t.backlog.push_back(0.0);

  EpisodeSummary s;
  s.episode = episode;
  s.seed = seed;
  RunningTotals totals;
  double reward_global = 0.0;
  double reward_center = 0.0;
  std::vector<std::size_t> previous = environment.world().deployment.server;

  while (!environment.done()) {
    const auto actions = baselines::act_all(policies, obs, policy_rng);
    env::StepResult r = environment.step(actions);
    const env::SlotOutcome& o = r.outcome;
    totals.add(o);
    reward_global += o.reward_global;
    reward_center += o.reward_center;
    for (std::size_t k = 0; k < kk; ++k) {
      traces[k].failures.push_back(o.failure[k]);
      traces[k].backlog.push_back(o.backlog[k]);
      if (o.trace.deployment[k] != previous[k]) ++s.deployment_changes;
    }
    previous = o.trace.deployment;
    if (sinks.csv) sinks.csv->write(episode, o);
    if (sinks.jsonl) sinks.jsonl->write(episode, o, totals, kk);
    obs = std::move(r.observations);
  }

  s.slots = totals.slots;
  s.requests = totals.requests;
  s.failures = totals.failures;
  s.total_energy = totals.energy;
  s.average_energy = totals.average_energy(kk);
  s.failure_ratio = totals.failure_ratio(kk);
  s.mean_backlog = totals.mean_backlog(kk);
  for (const auto& t : traces) s.max_final_backlog = std::max(s.max_final_backlog, t.backlog.back());
  if (totals.slots > 0) {
    s.mean_reward_global = reward_global / static_cast<double>(totals.slots);
    s.mean_reward_center = reward_center / static_cast<double>(totals.slots);
  }
  s.drift_check = lyapunov::verify_drift_bounds(traces, config.request_prob, config.epsilon,
                                          config.frame_length);
  return s;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_summary_header(std::ostream& out) {
  out << "episode,seed,slots,requests,failures,total_energy,average_energy,failure_ratio,"
         "mean_Y,max_final_Y,mean_r_g,mean_r_c,deployment_changes,drift_frames,mean_drift,"
         "mean_bound1,mean_bound2,gap1_sigmas,gap2_sigmas,envelope_violations\n";
}

void write_summary_row(std::ostream& out, const EpisodeSummary& s) {
  const auto& l = s.drift_check;
  out << s.episode << ',' << s.seed << ',' << s.slots << ',' << s.requests << ',' << s.failures
      << ',' << format_double(s.total_energy) << ',' << format_double(s.average_energy) << ','
      << format_double(s.failure_ratio) << ',' << format_double(s.mean_backlog) << ','
      << format_double(s.max_final_backlog) << ',' << format_double(s.mean_reward_global) << ','
      << format_double(s.mean_reward_center) << ',' << s.deployment_changes << ',' << l.frames
      << ',' << format_double(l.mean_drift) << ',' << format_double(l.mean_bound1) << ','
      << format_double(l.mean_bound2) << ',' << format_double(l.gap1.sigmas) << ','
      << format_double(l.gap2.sigmas) << ',' << l.envelope_violations << '\n';
}

std::vector<EpisodeSummary> run_episodes(const NetworkConfig& config,
                                         const baselines::PolicyAssignment& policies,
                                         std::uint64_t seed, std::int64_t episodes,
                                         const std::filesystem::path& out_dir) {
  if (episodes < 1) throw std::invalid_argument("episode count must be at least 1");
  std::ofstream csv_file;
  std::ofstream jsonl_file;
  std::ofstream summary;
  std::optional<SlotCsvWriter> csv;
  std::optional<SlotJsonlWriter> jsonl;
  EpisodeSinks sinks;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    csv_file = open_output(out_dir / "slots.csv");
    jsonl_file = open_output(out_dir / "slots.jsonl");
    summary = open_output(out_dir / "summary.csv");
    write_summary_header(summary);
    sinks.csv = &csv.emplace(csv_file);
    sinks.jsonl = &jsonl.emplace(jsonl_file);
  }

  std::vector<EpisodeSummary> out;
  for (std::int64_t e = 0; e < episodes; ++e) {
    out.push_back(run_episode(config, policies, seed + static_cast<std::uint64_t>(e), e, sinks));
    if (summary.is_open()) write_summary_row(summary, out.back());
  }
  return out;
}

NetworkConfig with_override(const NetworkConfig& config, const std::string& key, double value) {
  nlohmann::json j = config_to_json(config);
  if (!j.contains(key)) throw ConfigError(key, "unknown key");
  if (j[key].is_number_integer() || j[key].is_number_unsigned()) {
    if (value != std::floor(value)) throw ConfigError(key, "expected an integer value");
    j[key] = static_cast<std::int64_t>(value);
  } else if (j[key].is_number()) {
    j[key] = value;
  } else {
    throw ConfigError(key, "not a numeric key");
  }
  return config_from_json(j);
}

std::vector<SweepPoint> sweep(const NetworkConfig& config,
                              const baselines::PolicyAssignment& policies, const std::string& key,
                              const std::vector<double>& values, std::uint64_t seed,
                              std::int64_t episodes) {
  std::vector<SweepPoint> out;
  for (double v : values) {
    const NetworkConfig c = with_override(config, key, v);
    const auto summaries = run_episodes(c, policies, seed, episodes, {});
    SweepPoint p;
    p.key = key;
    p.value = v;
    p.episodes = episodes;
    for (const auto& s : summaries) {
      p.average_energy += s.average_energy;
      p.failure_ratio += s.failure_ratio;
      p.mean_backlog += s.mean_backlog;
      p.mean_reward_global += s.mean_reward_global;
      p.mean_reward_center += s.mean_reward_center;
    }
    const double n = static_cast<double>(summaries.size());
    p.average_energy /= n;
    p.failure_ratio /= n;
    p.mean_backlog /= n;
    p.mean_reward_global /= n;
    p.mean_reward_center /= n;
    out.push_back(p);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "key,value,episodes,average_energy,failure_ratio,mean_Y,mean_r_g,mean_r_c\n";
  for (const auto& p : points) {
    out << p.key << ',' << format_double(p.value) << ',' << p.episodes << ','
        << format_double(p.average_energy) << ',' << format_double(p.failure_ratio) << ','
        << format_double(p.mean_backlog) << ',' << format_double(p.mean_reward_global) << ','
        << format_double(p.mean_reward_center) << '\n';
  }
}

}  // namespace dtmec::harness
