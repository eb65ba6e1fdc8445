#include <csignal>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dtmec/baselines.hpp"
#include "dtmec/config.hpp"
#include "dtmec/episode.hpp"
#include "dtmec/lyapunov.hpp"
#include "dtmec/metrics.hpp"
#include "dtmec/server.hpp"

namespace {

using dtmec::harness::format_double;

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::int64_t episodes = 1;
  std::string mu_policy = "nearest-bs-fixed-power";
  std::string bs_policy = "equal-compute-split";
  std::string center_policy = "nearest-deployment";
};

void add_common(CLI::App* app, CommonOptions& o, bool with_policies) {
  app->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app->add_option_function<std::uint64_t>(
      "--seed",
      [&o](std::uint64_t s) {
        o.seed = s;
        o.seed_set = true;
      },
      "Seed (defaults to the configuration's seed)");
  app->add_option("--episodes", o.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  if (with_policies) {
    app->add_option("--mu-policy", o.mu_policy, "MU policy");
    app->add_option("--bs-policy", o.bs_policy, "BS policy");
    app->add_option("--center-policy", o.center_policy, "Centre policy");
  }
}

dtmec::NetworkConfig load(const CommonOptions& o) {
  dtmec::NetworkConfig c = o.config_path.empty() ? dtmec::NetworkConfig{}
                                                 : dtmec::load_config(o.config_path);
  if (o.seed_set) c.seed = o.seed;
  c.validate();
  return c;
}

dtmec::baselines::PolicyAssignment policies(const CommonOptions& o) {
  dtmec::baselines::PolicyAssignment p;
  p.mu = dtmec::baselines::policy_from_string(o.mu_policy);
  p.bs = dtmec::baselines::policy_from_string(o.bs_policy);
  p.center = dtmec::baselines::policy_from_string(o.center_policy);
  p.validate();
  return p;
}

int cmd_run(const CommonOptions& o) {
  const dtmec::NetworkConfig c = load(o);
  const auto p = policies(o);
  const auto summaries = dtmec::harness::run_episodes(c, p, c.seed, o.episodes, o.out);
  dtmec::harness::write_summary_header(std::cout);
  for (const auto& s : summaries) dtmec::harness::write_summary_row(std::cout, s);
  if (!o.out.empty()) std::cerr << "metrics written to " << o.out << '\n';
  return 0;
}

int cmd_serve(const CommonOptions& o, bool stdio, const std::string& host, std::uint16_t port) {
  const dtmec::NetworkConfig c = load(o);
  if (stdio) {
    dtmec::harness::serve_stream(c, std::cin, std::cout);
    return 0;
  }
  dtmec::harness::TcpServer server(c, o.out);
  server.start(host, port);
  std::cerr << "listening on " << host << ':' << server.port() << '\n';
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop && server.running()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

int cmd_verify(const CommonOptions& o, std::size_t frames, std::size_t frames_per_trace,
               double failure_prob, double min_sigmas) {
  const dtmec::NetworkConfig c = load(o);
  if (frames_per_trace == 0 || frames % frames_per_trace != 0) {
    throw std::invalid_argument("--frames must be a positive multiple of --frames-per-trace");
  }
  const double p = failure_prob < 0.0 ? c.request_prob : failure_prob;
  std::mt19937_64 rng(c.seed);
  const auto traces = dtmec::lyapunov::simulate_bernoulli_traces(
      frames / frames_per_trace, frames_per_trace, c.frame_length, p, c.epsilon, rng);
  const auto r = dtmec::lyapunov::verify_drift_bounds(traces, c.request_prob, c.epsilon,
                                                      c.frame_length);
  std::cout << "frames " << r.frames << "\n"
            << "B1 " << format_double(r.b1) << "\n"
            << "B2 " << format_double(r.b2) << "\n"
            << "mean_drift " << format_double(r.mean_drift) << "\n"
            << "mean_bound1 " << format_double(r.mean_bound1) << "\n"
            << "mean_bound2 " << format_double(r.mean_bound2) << "\n"
            << "gap1 " << format_double(r.gap1.mean) << " +- " << format_double(r.gap1.std_error)
            << " (" << format_double(r.gap1.sigmas) << " sigma)\n"
            << "gap2 " << format_double(r.gap2.mean) << " +- " << format_double(r.gap2.std_error)
            << " (" << format_double(r.gap2.sigmas) << " sigma)\n"
            << "envelope " << r.envelope_violations << " violations in " << r.slots_checked
            << " slots\n";
  const bool ok = r.ordered(min_sigmas) && r.envelope_violations == 0;
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--values is empty");
  return out;
}

int cmd_sweep(const CommonOptions& o, const std::string& param, const std::string& values) {
  const dtmec::NetworkConfig c = load(o);
  const auto points =
      dtmec::harness::sweep(c, policies(o), param, parse_values(values), c.seed, o.episodes);
  if (o.out.empty()) {
    dtmec::harness::write_sweep_csv(std::cout, points);
    return 0;
  }
  std::filesystem::create_directories(o.out);
  const auto path = std::filesystem::path(o.out) / ("sweep_" + param + ".csv");
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  dtmec::harness::write_sweep_csv(file, points);
  dtmec::harness::write_sweep_csv(std::cout, points);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-timescale digital-twin edge network simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Run baseline-policy episodes");
  add_common(run, run_opts, true);
  run->add_option("--out", run_opts.out, "Directory for slots.csv, slots.jsonl, summary.csv");

  CommonOptions serve_opts;
  bool stdio = false;
  std::string host = "127.0.0.1";
  std::uint16_t port = 5555;
  auto* serve = app.add_subcommand("serve", "Serve the learner protocol");
  add_common(serve, serve_opts, false);
  serve->add_flag("--stdio", stdio, "Serve a single session on stdin/stdout");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--out", serve_opts.out, "Directory for per-session metrics");

  CommonOptions verify_opts;
  std::size_t frames = 10000;
  std::size_t frames_per_trace = 10;
  double failure_prob = -1.0;
  double min_sigmas = 3.0;
  auto* verify = app.add_subcommand("verify", "Monte-Carlo check of the drift bounds");
  add_common(verify, verify_opts, false);
  verify->add_option("--frames", frames, "Total frames");
  verify->add_option("--frames-per-trace", frames_per_trace, "Frames per independent queue");
  verify->add_option("--failure-prob", failure_prob,
                     "Bernoulli failure probability (defaults to request_prob)");
  verify->add_option("--min-sigmas", min_sigmas, "Required margin on each gap");

  CommonOptions sweep_opts;
  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Vary one configuration key");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--param", param, "Configuration key, e.g. num_mus")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", sweep_opts.out, "Directory for sweep_<param>.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts);
    if (*serve) return cmd_serve(serve_opts, stdio, host, port);
    if (*verify) return cmd_verify(verify_opts, frames, frames_per_trace, failure_prob, min_sigmas);
    if (*sweep) return cmd_sweep(sweep_opts, param, values);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
