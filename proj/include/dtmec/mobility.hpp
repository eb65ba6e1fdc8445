#pragma once

#include "dtmec/types.hpp"

namespace dtmec::mobility {

enum class BoundaryMode { kReflect, kWrap };

struct MobilityParams {
  double speed_memory = 0.8;    // memory factor of the speed process, in [0, 1]
  double heading_memory = 0.8;  // memory factor of the heading process, in [0, 1]
  double mean_speed = 6.0;      // m/s
  double mean_heading = 0.0;    // rad
  double speed_noise_mean = 0.0;
  double speed_noise_std = 1.0;
  double heading_noise_mean = 0.0;
  double heading_noise_std = 0.5;
  double slot_length = 0.05;    // s
  double area_width = 1000.0;   // m
  BoundaryMode boundary = BoundaryMode::kReflect;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

struct MobilityState {
  Vec2 position;
  double speed = 0.0;    // m/s, never negative
  double heading = 0.0;  // rad

  friend bool operator==(const MobilityState&, const MobilityState&) = default;
};

/// Uniform position over the square area, speed at its mean, uniform heading.
MobilityState init_mobility(const MobilityParams& params, Rng& rng);

/// One Gauss-Markov slot. The position advances with the previous slot's
/// speed and heading; speed and heading then take their new AR(1) values.
MobilityState step_mobility(const MobilityState& state, const MobilityParams& params, Rng& rng);

/// Folds a coordinate back into [0, width] by mirroring. Returns true when
/// an odd number of reflections occurred (the velocity component flips).
bool reflect_coordinate(double& value, double width);

}  // namespace dtmec::mobility
