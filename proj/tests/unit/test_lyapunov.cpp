#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dtmec/lyapunov.hpp"

using namespace dtmec::lyapunov;

TEST_CASE("queue recursion examples") {
  CHECK(queue_step(0.0, 0, 0.2) == 0.0);
  CHECK(queue_step(0.0, 1, 0.2) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(queue_step(0.1, 0, 0.2) == 0.0);
  CHECK(queue_step(1.0, 0, 0.2) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("per-slot cost examples") {
  CHECK(per_slot_cost(0.0, 0.0, 1, 0.2, 1.0, 150000.0) == 0.0);
  CHECK(per_slot_cost(0.001, 0.8, 1, 0.2, 1.0, 50.0 * 30.0 * 100.0) ==
        doctest::Approx(0.001 / 150000.0 + 0.64).epsilon(1e-14));
  CHECK(per_slot_cost(0.0, 2.0, 0, 0.2, 0.5, 1.0) == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("summed cost matches an independent recomputation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  const double eps = 0.2;
  const double eta = 1.3;
  const double norm = 12345.0;
  const int t_len = 10;
  double y = 0.0;
  double y_frame = 0.0;
  double total = 0.0;
  double expected = 0.0;
  for (int n = 0; n < 500; ++n) {
    if (n % t_len == 0) y_frame = y;
    const int x = coin(rng) ? 1 : 0;
    const double e = 0.01 * u(rng);
    total += per_slot_cost(e, y_frame, x, eps, eta, norm);
    expected += e / norm + eta * y_frame * (x - eps);
    y = std::max(y + x - eps, 0.0);
  }
  CHECK(total == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bound constants") {
  CHECK(slot_drift_constant(0.5, 0.2) == doctest::Approx(0.27).epsilon(1e-15));
  // B2 = B1 + (T-1)((1-eps)lambda + eps^2)/2 = 0.27 + 99 * 0.44 / 2
  CHECK(frame_drift_constant(0.5, 0.2, 100) == doctest::Approx(0.27 + 21.78).epsilon(1e-14));
  CHECK(frame_drift_constant(0.5, 0.2, 1) == slot_drift_constant(0.5, 0.2));
  for (double lambda = 0.0; lambda <= 1.0; lambda += 0.1) {
    for (double eps = 0.0; eps <= 1.0; eps += 0.1) {
      for (std::int64_t t : {1, 2, 10, 100, 1000}) {
        REQUIRE(frame_drift_constant(lambda, eps, t) >= slot_drift_constant(lambda, eps));
      }
    }
  }
}

TEST_CASE("queue trace from failures") {
  const QueueTrace t = QueueTrace::from_failures({1, 1, 0, 0, 0, 0}, 0.25);
  REQUIRE(t.backlog.size() == 7);
  const std::vector<double> expected{0.0, 0.75, 1.5, 1.25, 1.0, 0.75, 0.5};
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(t.backlog[i] == expected[i]);
}

TEST_CASE("draining trace: drift is non-positive and bounded") {
  std::vector<int> x(300, 0);
  std::fill(x.begin(), x.begin() + 40, 1);  // fill, then drain
  const std::vector<QueueTrace> traces{QueueTrace::from_failures(x, 0.2)};
  const DriftBoundReport r = verify_drift_bounds(traces, 0.5, 0.2, 100);
  REQUIRE(r.frames == 3);
  CHECK(r.drift[1] <= 0.0);
  CHECK(r.drift[2] <= 0.0);
  for (std::size_t q = 0; q < r.frames; ++q) {
    CHECK(r.drift[q] <= r.bound1[q]);
    CHECK(r.bound1[q] <= r.bound2[q]);
  }
  CHECK(r.envelope_violations == 0);
}

TEST_CASE("every-slot failures saturate the envelope upper bound") {
  const std::vector<QueueTrace> traces{QueueTrace::from_failures(std::vector<int>(200, 1), 0.2)};
  const DriftBoundReport r = verify_drift_bounds(traces, 1.0, 0.2, 100);
  CHECK(r.envelope_violations == 0);
  for (std::size_t n = 0; n <= 200; ++n) {
    const std::size_t start = n == 200 ? 100 : (n / 100) * 100;
    const double upper = traces[0].backlog[start] + static_cast<double>(n - start) * 0.8;
    REQUIRE(traces[0].backlog[n] == doctest::Approx(upper).epsilon(1e-12));
  }
}

TEST_CASE("envelope violations are counted on corrupted traces") {
  QueueTrace t = QueueTrace::from_failures(std::vector<int>(100, 0), 0.2);
  t.backlog[50] = 45.0;  // envelope allows at most 50 * 0.8
  const std::vector<QueueTrace> traces{t};
  const DriftBoundReport r = verify_drift_bounds(traces, 0.5, 0.2, 100);
  CHECK(r.envelope_violations == 1);
  QueueTrace bad = t;
  bad.backlog.pop_back();
  const std::vector<QueueTrace> broken{bad};
  CHECK_THROWS_AS(verify_drift_bounds(broken, 0.5, 0.2, 100), std::invalid_argument);
}

TEST_CASE("Bernoulli traces order the bounds with margin") {
  std::mt19937_64 rng(12);
  const auto traces = simulate_bernoulli_traces(100, 10, 100, 0.5, 0.2, rng);
  const DriftBoundReport r = verify_drift_bounds(traces, 0.5, 0.2, 100);
  CHECK(r.frames == 1000);
  CHECK(r.envelope_violations == 0);
  CHECK(r.mean_drift <= r.mean_bound1);
  CHECK(r.mean_bound1 <= r.mean_bound2);
  CHECK(r.ordered(3.0));
}

TEST_CASE("mean-rate stability diagnostic") {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution below(0.1);
  std::vector<int> x(20000);
  for (int& v : x) v = below(rng) ? 1 : 0;
  const QueueTrace stable = QueueTrace::from_failures(x, 0.2);
  CHECK(mean_rate_stable(stable.backlog, 5000, 1e-2));
  const QueueTrace growing = QueueTrace::from_failures(std::vector<int>(20000, 1), 0.2);
  CHECK_FALSE(mean_rate_stable(growing.backlog, 5000, 1e-2));
}
