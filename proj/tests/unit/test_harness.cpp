#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dtmec/episode.hpp"
#include "dtmec/metrics.hpp"

using namespace dtmec;
using namespace dtmec::harness;

namespace {

NetworkConfig small() {
  NetworkConfig c;
  c.num_mus = 5;
  c.num_bs = 2;
  c.frame_length = 10;
  c.num_frames = 6;
  c.migration_slots = 2;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dtmec_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("double formatting round-trips with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  for (double v : {1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.001 / 150000.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("seeded episodes are repeatable") {
  const NetworkConfig c = small();
  const baselines::PolicyAssignment p;
  const EpisodeSummary a = run_episode(c, p, 17);
  const EpisodeSummary b = run_episode(c, p, 17);
  CHECK(a.slots == 60);
  CHECK(a.total_energy == b.total_energy);
  CHECK(a.failures == b.failures);
  CHECK(a.mean_backlog == b.mean_backlog);
  CHECK(a.mean_reward_global == b.mean_reward_global);
  CHECK(a.drift_check.drift == b.drift_check.drift);
  CHECK(a.drift_check.frames == 5 * 6);
  CHECK(a.drift_check.envelope_violations == 0);
}

TEST_CASE("no requests means zero energy") {
  NetworkConfig c = small();
  c.request_prob = 0.0;
  const EpisodeSummary s = run_episode(c, {}, 3);
  CHECK(s.total_energy == 0.0);
  CHECK(s.average_energy == 0.0);
  CHECK(s.failure_ratio == 0.0);
  CHECK(s.requests == 0);
}

TEST_CASE("generous resources give zero failure ratio") {
  NetworkConfig c = small();
  c.migration_slots = 0;
  c.bandwidth = 1e9;
  c.wired_capacity = 1e9;
  c.max_cpu_hz = 1e11;
  const EpisodeSummary s = run_episode(c, {}, 3);
  CHECK(s.requests > 0);
  CHECK(s.failure_ratio == 0.0);
  CHECK(s.average_energy == doctest::Approx(s.total_energy / (5.0 * 60.0)));
}

TEST_CASE("metrics files: layout, reward consistency and replay") {
  const NetworkConfig c = small();
  const auto dir1 = scratch("run1");
  const auto dir2 = scratch("run2");
  const auto s1 = run_episodes(c, {}, 9, 2, dir1);
  const auto s2 = run_episodes(c, {}, 9, 2, dir2);
  REQUIRE(s1.size() == 2);
  CHECK(s1[1].seed == 10);

  for (const char* name : {"slots.csv", "slots.jsonl", "summary.csv"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
  }

  std::istringstream csv(slurp(dir1 / "slots.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "episode,slot,mu,t,X,E,Xi,Y,r_g,r_c");
  std::size_t rows = 0;
  double xi_sum = 0.0;
  std::string current_slot;
  std::string current_rg;
  auto close_slot = [&] {
    if (current_slot.empty()) return;
    REQUIRE(-c.reward_scale * xi_sum == std::stod(current_rg));
  };
  while (std::getline(csv, line)) {
    const auto f = split(line, ',');
    REQUIRE(f.size() == 10);
    const std::string key = f[0] + ":" + f[1];
    if (key != current_slot) {
      close_slot();
      current_slot = key;
      current_rg = f[8];
      xi_sum = 0.0;
    }
    xi_sum += std::stod(f[6]);
    ++rows;
  }
  close_slot();
  CHECK(rows == 2 * 60 * 5);

  std::istringstream jsonl(slurp(dir1 / "slots.jsonl"));
  std::size_t records = 0;
  while (std::getline(jsonl, line)) {
    const auto j = nlohmann::json::parse(line);
    REQUIRE(j["X"].size() == 5);
    REQUIRE(j.contains("running"));
    ++records;
  }
  CHECK(records == 2 * 60);

  std::istringstream summary(slurp(dir1 / "summary.csv"));
  std::size_t lines = 0;
  while (std::getline(summary, line)) ++lines;
  CHECK(lines == 3);
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("config overrides and sweeps") {
  const NetworkConfig c = small();
  CHECK(with_override(c, "num_mus", 8).num_mus == 8);
  CHECK(with_override(c, "eta", 2.5).eta == 2.5);
  CHECK(with_override(c, "noise_power_dbw", -80).noise_power == doctest::Approx(1e-8));
  CHECK_THROWS_AS(with_override(c, "num_mus", 2.5), ConfigError);
  CHECK_THROWS_AS(with_override(c, "nope", 1), ConfigError);
  CHECK_THROWS_AS(with_override(c, "boundary", 1), ConfigError);

  const auto points = sweep(c, {}, "request_prob", {0.0, 0.5}, 4, 2);
  REQUIRE(points.size() == 2);
  CHECK(points[0].average_energy == 0.0);
  CHECK(points[1].average_energy > 0.0);
  std::ostringstream out;
  write_sweep_csv(out, points);
  CHECK(out.str().rfind("key,value,episodes,", 0) == 0);
}
