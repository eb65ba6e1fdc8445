#include "dtmec/migration.hpp"

#include <stdexcept>
#include <string>

namespace dtmec::migration {

TwoTimescaleClock::TwoTimescaleClock(std::int64_t frame_length, std::int64_t num_frames)
    : frame_length_(frame_length), num_frames_(num_frames) {
  if (frame_length_ < 1) throw std::invalid_argument("clock: frame length must be >= 1");
  if (num_frames_ < 1) throw std::invalid_argument("clock: number of frames must be >= 1");
}

DeploymentMap DeploymentMap::initial(std::vector<std::size_t> servers) {
  DeploymentMap map;
  map.window_start.assign(servers.size(), 0);
  map.window_end.assign(servers.size(), 0);
  map.server = std::move(servers);
  return map;
}

DeploymentMap apply_deployment(const DeploymentMap& current, std::span<const std::size_t> decision,
                               std::size_t num_servers, const TwoTimescaleClock& clock,
                               std::span<const std::int64_t> migration_slots) {
  if (!clock.is_frame_start()) {
    throw std::logic_error("apply_deployment: slot " + std::to_string(clock.slot()) +
                           " is not a frame boundary");
  }
  if (decision.size() != current.size() || migration_slots.size() != current.size()) {
    throw std::invalid_argument("apply_deployment: size mismatch");
  }
  const std::int64_t start = clock.slot();
  DeploymentMap next = current;
  for (std::size_t k = 0; k < decision.size(); ++k) {
    if (decision[k] >= num_servers) {
      throw std::invalid_argument("apply_deployment: server index out of range for MU " +
                                  std::to_string(k));
    }
    const std::int64_t g = migration_slots[k];
    if (g < 0 || g >= clock.frame_length()) {
      throw std::invalid_argument("apply_deployment: migration length outside [0, T)");
    }
    next.server[k] = decision[k];
    next.window_start[k] = start;
    next.window_end[k] = decision[k] != current.server[k] ? start + g : start;
  }
  return next;
}

bool is_blocked(std::size_t k, std::int64_t slot, const DeploymentMap& map) {
  return slot >= map.window_start[k] && slot < map.window_end[k];
}

}  // namespace dtmec::migration
