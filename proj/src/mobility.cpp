#include "dtmec/mobility.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace dtmec::mobility {

namespace {

void require(bool ok, const char* field) {
  if (!ok) throw std::invalid_argument(std::string("invalid mobility parameter: ") + field);
}

double wrap_coordinate(double value, double width) {
  double r = std::fmod(value, width);
  if (r < 0.0) r += width;
  return r;
}

}  // namespace

void MobilityParams::validate() const {
  require(speed_memory >= 0.0 && speed_memory <= 1.0, "speed_memory");
  require(heading_memory >= 0.0 && heading_memory <= 1.0, "heading_memory");
  require(mean_speed >= 0.0 && std::isfinite(mean_speed), "mean_speed");
  require(std::isfinite(mean_heading), "mean_heading");
  require(speed_noise_std >= 0.0, "speed_noise_std");
  require(heading_noise_std >= 0.0, "heading_noise_std");
  require(slot_length > 0.0, "slot_length");
  require(area_width > 0.0, "area_width");
}

bool reflect_coordinate(double& value, double width) {
  if (value >= 0.0 && value <= width) return false;
  // Mirror images repeat with period 2W.
  const double period = 2.0 * width;
  double r = std::fmod(value, period);
  if (r < 0.0) r += period;
  const long crossings = static_cast<long>(std::floor(value / width));
  if (r > width) r = period - r;
  value = r;
  return (crossings % 2) != 0;
}

MobilityState init_mobility(const MobilityParams& params, Rng& rng) {
  std::uniform_real_distribution<double> coord(0.0, params.area_width);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  MobilityState s;
  s.position.x = coord(rng);
  s.position.y = coord(rng);
  s.speed = params.mean_speed;
  s.heading = angle(rng);
  return s;
}

MobilityState step_mobility(const MobilityState& state, const MobilityParams& params, Rng& rng) {
  std::normal_distribution<double> speed_noise(params.speed_noise_mean, params.speed_noise_std);
  std::normal_distribution<double> heading_noise(params.heading_noise_mean,
                                                 params.heading_noise_std);
  // normal_distribution requires a positive stddev; a zero stddev means the mean exactly.
  const double phi = params.speed_noise_std > 0.0 ? speed_noise(rng) : params.speed_noise_mean;
  const double psi =
      params.heading_noise_std > 0.0 ? heading_noise(rng) : params.heading_noise_mean;

  const double m1 = params.speed_memory;
  const double m2 = params.heading_memory;

  MobilityState next;
  next.speed = m1 * state.speed + (1.0 - m1) * params.mean_speed + std::sqrt(1.0 - m1 * m1) * phi;
  if (next.speed < 0.0) next.speed = 0.0;
  next.heading =
      m2 * state.heading + (1.0 - m2) * params.mean_heading + std::sqrt(1.0 - m2 * m2) * psi;

  next.position.x = state.position.x + state.speed * std::cos(state.heading) * params.slot_length;
  next.position.y = state.position.y + state.speed * std::sin(state.heading) * params.slot_length;

  const double w = params.area_width;
  if (params.boundary == BoundaryMode::kWrap) {
    next.position.x = wrap_coordinate(next.position.x, w);
    next.position.y = wrap_coordinate(next.position.y, w);
    return next;
  }
  if (reflect_coordinate(next.position.x, w)) next.heading = std::numbers::pi - next.heading;
  if (reflect_coordinate(next.position.y, w)) next.heading = -next.heading;
  return next;
}

}  // namespace dtmec::mobility
