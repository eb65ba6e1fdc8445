#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dtmec/radio.hpp"

using namespace dtmec;
using namespace dtmec::radio;

namespace {

// Channel with chosen power gains and zero phase.
ChannelMatrix with_gains(const std::vector<std::vector<double>>& g) {
  ChannelMatrix h(g.size(), g.front().size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (std::size_t m = 0; m < g[k].size(); ++m) h.at(k, m) = std::sqrt(g[k][m]);
  }
  return h;
}

}  // namespace

TEST_CASE("very large Rician factor leaves only the path loss") {
  ChannelParams p;
  p.rician_factor = 1e12;
  Rng rng(1);
  const std::vector<Vec2> mus{{0.0, 0.0}, {30.0, 40.0}};
  const std::vector<Vec2> bss{{100.0, 0.0}, {0.0, 0.0}};
  const ChannelMatrix h = draw_channels(mus, bss, p, rng);
  CHECK(h.power_gain(0, 0) == doctest::Approx(1e-3 / 1e4).epsilon(1e-6));
  CHECK(h.power_gain(1, 1) == doctest::Approx(1e-3 / 2500.0).epsilon(1e-6));
  // Co-located pair uses the 1 m floor.
  CHECK(h.power_gain(0, 1) == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("mean channel power equals the path-loss gain") {
  ChannelParams p;
  Rng rng(17);
  const std::vector<Vec2> mus{{0.0, 0.0}};
  const std::vector<Vec2> bss{{1.0, 0.0}};
  const int n = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = draw_channels(mus, bss, p, rng).power_gain(0, 0);
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  CHECK(std::abs(mean - 1e-3) < 3.0 * sd / std::sqrt(n));
}

TEST_CASE("doubling the distance quarters the mean gain") {
  ChannelParams p;
  p.rician_factor = INFINITY;
  Rng rng(2);
  const std::vector<Vec2> mus{{0.0, 0.0}};
  const std::vector<Vec2> near{{50.0, 0.0}};
  const std::vector<Vec2> far{{100.0, 0.0}};
  const double g1 = draw_channels(mus, near, p, rng).power_gain(0, 0);
  const double g2 = draw_channels(mus, far, p, rng).power_gain(0, 0);
  CHECK(g2 == doctest::Approx(g1 / 4.0).epsilon(1e-14));
}

TEST_CASE("single transmitter has no interference") {
  ChannelParams p;
  const ChannelMatrix h = with_gains({{1e-6}});
  const std::vector<double> powers{0.5};
  const std::vector<bool> tx{true};
  CHECK(sinr(0, h, {0}, powers, tx, p) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("two symmetric MUs at one BS") {
  ChannelParams p;
  const double g = 2e-7;
  const ChannelMatrix h = with_gains({{g}, {g}});
  const std::vector<double> powers{0.3, 0.3};
  const std::vector<bool> tx{true, true};
  const double expected = 0.3 * g / (0.3 * g + p.noise_power);
  CHECK(sinr(0, h, {0, 0}, powers, tx, p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(sinr(1, h, {0, 0}, powers, tx, p) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("SINR matches a literal interference sum on random instances") {
  ChannelParams p;
  Rng rng(5);
  std::uniform_real_distribution<double> pos(0.0, 1000.0);
  std::uniform_real_distribution<double> pw(0.0, 0.5);
  std::bernoulli_distribution coin(0.6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> mus(5);
    std::vector<Vec2> bss(3);
    for (auto& v : mus) v = {pos(rng), pos(rng)};
    for (auto& v : bss) v = {pos(rng), pos(rng)};
    const ChannelMatrix h = draw_channels(mus, bss, p, rng);
    Association assoc(5);
    std::vector<double> powers(5);
    std::vector<bool> tx(5);
    for (int k = 0; k < 5; ++k) {
      assoc[k] = static_cast<int>(rng() % 3);
      powers[k] = pw(rng);
      tx[k] = coin(rng);
    }
    for (std::size_t k = 0; k < 5; ++k) {
      const auto m = static_cast<std::size_t>(assoc[k]);
      double interference = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        if (i != k && tx[i]) {
          const double re = h.at(i, m).real();
          const double im = h.at(i, m).imag();
          interference += powers[i] * (re * re + im * im);
        }
      }
      const double re = h.at(k, m).real();
      const double im = h.at(k, m).imag();
      const double expected = powers[k] * (re * re + im * im) / (interference + p.noise_power);
      const double got = sinr(k, h, assoc, powers, tx, p);
      REQUIRE(got == doctest::Approx(expected).epsilon(1e-12));
      REQUIRE(got >= 0.0);
      REQUIRE(got <= powers[k] * h.power_gain(k, m) / p.noise_power * (1.0 + 1e-15));
    }
  }
}

TEST_CASE("unassociated MU is rejected") {
  ChannelParams p;
  const ChannelMatrix h = with_gains({{1e-6}});
  const std::vector<double> powers{0.5};
  const std::vector<bool> tx{true};
  CHECK_THROWS_AS(sinr(0, h, {kNoAssociation}, powers, tx, p), std::invalid_argument);
}

TEST_CASE("Shannon rate") {
  CHECK(rate_from_sinr(0.0, 1e7) == 0.0);
  CHECK(rate_from_sinr(1.0, 1e7) == doctest::Approx(1e7).epsilon(1e-15));
  // 10^7 * log2(501), evaluated to 30 digits offline.
  CHECK(rate_from_sinr(500.0, 1e7) ==
        doctest::Approx(89686667.93195208405925059).epsilon(1e-14));
}

TEST_CASE("wired rate sums the relayed allocations") {
  WiredTopology t = uniform_topology(3, 2, 10e6);
  CHECK(wired_rate(0, t) == 0.0);
  t.set_allocation(0, 2, 0, 2e6);
  CHECK(wired_rate(0, t) == 0.0);  // allocated but not relayed
  t.set_relay(0, 0, 2);
  CHECK(wired_rate(0, t) == 2e6);
  t.set_relay(0, 1, 2);  // moving the relay clears the old pair
  CHECK_FALSE(t.relay(0, 0, 2));
  CHECK(wired_rate(0, t) == 0.0);
}

TEST_CASE("wired rate matches a literal double sum") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 1e6);
  const std::size_t m = 4;
  const std::size_t kk = 6;
  WiredTopology t = uniform_topology(m, kk, 10e6);
  std::vector<std::vector<std::vector<int>>> zeta(kk, std::vector<std::vector<int>>(m, std::vector<int>(m)));
  for (std::size_t k = 0; k < kk; ++k) {
    const std::size_t i = rng() % m;
    const std::size_t j = rng() % m;
    if (rng() % 3 != 0) {
      t.set_relay(k, i, j);
      zeta[k][i][j] = 1;
    }
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) t.set_allocation(a, b, k, u(rng));
    }
  }
  for (std::size_t k = 0; k < kk; ++k) {
    double expected = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) expected += zeta[k][a][b] * t.allocation(a, b, k);
    }
    CHECK(wired_rate(k, t) == expected);
  }
}

TEST_CASE("wired projection keeps, halves, or bounds link totals") {
  const std::size_t m = 2;
  const std::size_t kk = 2;
  const double cap = 10e6;
  const WiredTopology t = uniform_topology(m, kk, cap);
  auto idx = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * m + j) * kk + k; };

  std::vector<double> raw(m * m * kk, 0.0);
  raw[idx(0, 1, 0)] = 2e6;
  raw[idx(0, 1, 1)] = 3e6;
  WiredTopology out = project_wired_allocations(raw, t);
  CHECK(out.allocation(0, 1, 0) == 2e6);
  CHECK(out.allocation(0, 1, 1) == 3e6);

  raw[idx(0, 1, 0)] = 8e6;
  raw[idx(0, 1, 1)] = 12e6;
  out = project_wired_allocations(raw, t);
  CHECK(out.allocation(0, 1, 0) == doctest::Approx(4e6).epsilon(1e-15));
  CHECK(out.allocation(0, 1, 1) == doctest::Approx(6e6).epsilon(1e-15));

  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 2.0 * cap);
  for (int trial = 0; trial < 500; ++trial) {
    for (double& v : raw) v = u(rng);
    out = project_wired_allocations(raw, t);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double total = 0.0;
        for (std::size_t k = 0; k < kk; ++k) total += out.allocation(i, j, k);
        REQUIRE(total <= t.capacity(i, j) * (1.0 + 1e-12));
      }
    }
  }
  raw[0] = -1.0;
  CHECK_THROWS_AS(project_wired_allocations(raw, t), std::invalid_argument);
  CHECK_THROWS_AS(project_wired_allocations(std::vector<double>(3, 0.0), t),
                  std::invalid_argument);
}

TEST_CASE("channel parameters are validated") {
  ChannelParams p;
  CHECK_NOTHROW(p.validate());
  p.noise_power = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
