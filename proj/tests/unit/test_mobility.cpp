#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dtmec/mobility.hpp"

using namespace dtmec;
using namespace dtmec::mobility;

namespace {

MobilityParams quiet() {
  MobilityParams p;
  p.speed_noise_std = 0.0;
  p.heading_noise_std = 0.0;
  return p;
}

}  // namespace

TEST_CASE("full speed memory without noise keeps the speed") {
  MobilityParams p = quiet();
  p.speed_memory = 1.0;
  p.heading_memory = 1.0;
  Rng rng(3);
  MobilityState s{{500.0, 500.0}, 3.5, 0.7};
  for (int i = 0; i < 100; ++i) {
    s = step_mobility(s, p, rng);
    CHECK(s.speed == 3.5);
  }
}

TEST_CASE("zero speed memory without noise jumps to the mean speed") {
  MobilityParams p = quiet();
  p.speed_memory = 0.0;
  p.mean_speed = 7.0;
  Rng rng(3);
  const MobilityState s = step_mobility({{500.0, 500.0}, 1.0, 0.0}, p, rng);
  CHECK(s.speed == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("position advances with the previous speed and heading") {
  MobilityParams p = quiet();
  p.speed_memory = 0.0;
  p.mean_speed = 9.0;
  Rng rng(1);
  const MobilityState s = step_mobility({{0.0, 0.0}, 2.0, 0.0}, p, rng);
  CHECK(s.position.x == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s.position.y == 0.0);
  CHECK(s.speed == doctest::Approx(9.0));
}

TEST_CASE("straight line at constant speed without noise and full memory") {
  MobilityParams p = quiet();
  p.speed_memory = 1.0;
  p.heading_memory = 1.0;
  Rng rng(5);
  const double heading = 0.3;
  MobilityState s{{100.0, 200.0}, 4.0, heading};
  for (int n = 1; n <= 200; ++n) {
    s = step_mobility(s, p, rng);
    const double d = 4.0 * 0.05 * n;
    CHECK(s.position.x == doctest::Approx(100.0 + d * std::cos(heading)).epsilon(1e-12));
    CHECK(s.position.y == doctest::Approx(200.0 + d * std::sin(heading)).epsilon(1e-12));
  }
}

TEST_CASE("AR(1) speed has the configured stationary mean and variance") {
  MobilityParams p;
  p.speed_memory = 0.5;
  p.mean_speed = 6.0;
  p.speed_noise_mean = 0.0;
  p.speed_noise_std = 1.0;
  p.area_width = 1e9;  // keep far from the boundary
  Rng rng(11);
  MobilityState s{{5e8, 5e8}, 6.0, 0.0};
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    s = step_mobility(s, p, rng);
    sum += s.speed;
    sum_sq += s.speed * s.speed;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // AR(1) samples are correlated: var(mean) = sigma^2/N * (1+m)/(1-m).
  const double m = p.speed_memory;
  const double se = std::sqrt(1.0 / n * (1.0 + m) / (1.0 - m));
  CHECK(std::abs(mean - 6.0) < 3.0 * se);
  // Clamping at zero sits 6 sigma away and cannot bias the variance measurably.
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("initial state lies in the area with uniform mean position") {
  MobilityParams p;
  Rng rng(21);
  const int n = 10000;
  double sx = 0.0;
  double sy = 0.0;
  for (int i = 0; i < n; ++i) {
    const MobilityState s = init_mobility(p, rng);
    REQUIRE(s.position.x >= 0.0);
    REQUIRE(s.position.x <= 1000.0);
    REQUIRE(s.position.y >= 0.0);
    REQUIRE(s.position.y <= 1000.0);
    REQUIRE(s.speed == p.mean_speed);
    REQUIRE(s.heading >= 0.0);
    REQUIRE(s.heading < 2.0 * std::numbers::pi);
    sx += s.position.x;
    sy += s.position.y;
  }
  const double se = 1000.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sx / n - 500.0) < 3.0 * se);
  CHECK(std::abs(sy / n - 500.0) < 3.0 * se);
}

TEST_CASE("same seed gives identical trajectories") {
  MobilityParams p;
  Rng a(99);
  Rng b(99);
  MobilityState sa = init_mobility(p, a);
  MobilityState sb = init_mobility(p, b);
  CHECK(sa == sb);
  for (int i = 0; i < 1000; ++i) {
    sa = step_mobility(sa, p, a);
    sb = step_mobility(sb, p, b);
    REQUIRE(sa == sb);
  }
}

TEST_CASE("positions stay inside the area and speed stays non-negative") {
  MobilityParams p;
  p.mean_speed = 40.0;
  p.speed_noise_std = 20.0;
  p.area_width = 50.0;
  Rng rng(7);
  MobilityState s = init_mobility(p, rng);
  for (int i = 0; i < 20000; ++i) {
    s = step_mobility(s, p, rng);
    REQUIRE(s.position.x >= 0.0);
    REQUIRE(s.position.x <= 50.0);
    REQUIRE(s.position.y >= 0.0);
    REQUIRE(s.position.y <= 50.0);
    REQUIRE(s.speed >= 0.0);
  }
}

TEST_CASE("reflection mirrors position, flips heading and keeps speed") {
  MobilityParams p = quiet();
  p.speed_memory = 1.0;
  p.heading_memory = 1.0;
  p.area_width = 10.0;
  Rng rng(1);
  SUBCASE("right edge") {
    const MobilityState s = step_mobility({{9.9, 5.0}, 4.0, 0.0}, p, rng);
    CHECK(s.position.x == doctest::Approx(9.9));  // 10.1 mirrored
    CHECK(std::cos(s.heading) == doctest::Approx(-1.0));
    CHECK(s.speed == 4.0);
  }
  SUBCASE("bottom edge") {
    const MobilityState s = step_mobility({{5.0, 0.05}, 2.0, -std::numbers::pi / 2}, p, rng);
    CHECK(s.position.y == doctest::Approx(0.05));
    CHECK(std::sin(s.heading) == doctest::Approx(1.0));
    CHECK(s.speed == 2.0);
  }
}

TEST_CASE("reflect_coordinate folds with period twice the width") {
  double v = 12.0;
  CHECK(reflect_coordinate(v, 10.0));
  CHECK(v == doctest::Approx(8.0));
  v = -3.0;
  CHECK(reflect_coordinate(v, 10.0));
  CHECK(v == doctest::Approx(3.0));
  v = 23.0;  // two crossings: back to the original direction
  CHECK_FALSE(reflect_coordinate(v, 10.0));
  CHECK(v == doctest::Approx(3.0));
  v = 4.0;
  CHECK_FALSE(reflect_coordinate(v, 10.0));
  CHECK(v == 4.0);
}

TEST_CASE("wrap mode keeps positions in the area") {
  MobilityParams p = quiet();
  p.speed_memory = 1.0;
  p.heading_memory = 1.0;
  p.area_width = 10.0;
  p.boundary = BoundaryMode::kWrap;
  Rng rng(1);
  const MobilityState s = step_mobility({{9.9, 5.0}, 4.0, 0.0}, p, rng);
  CHECK(s.position.x == doctest::Approx(0.1));
  CHECK(s.heading == 0.0);
}

TEST_CASE("invalid parameters are rejected") {
  MobilityParams p;
  p.speed_memory = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MobilityParams{};
  p.slot_length = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = MobilityParams{};
  p.heading_noise_std = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(MobilityParams{}.validate());
}
