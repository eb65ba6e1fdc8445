#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dtmec::migration {

/// Slot/frame bookkeeping. Frame q covers slots [qT, (q+1)T).
class TwoTimescaleClock {
 public:
  TwoTimescaleClock(std::int64_t frame_length, std::int64_t num_frames);

  std::int64_t slot() const { return slot_; }
  std::int64_t frame() const { return slot_ / frame_length_; }
  std::int64_t frame_length() const { return frame_length_; }
  std::int64_t num_frames() const { return num_frames_; }
  std::int64_t horizon_slots() const { return frame_length_ * num_frames_; }
  std::int64_t slot_in_frame() const { return slot_ % frame_length_; }
  bool is_frame_start() const { return slot_ % frame_length_ == 0; }
  bool done() const { return slot_ >= horizon_slots(); }

  void advance() { ++slot_; }
  void reset() { slot_ = 0; }

 private:
  std::int64_t frame_length_;
  std::int64_t num_frames_;
  std::int64_t slot_ = 0;
};

/// DT placement per MU plus the half-open blackout window [start, end) of
/// the migration triggered at the latest frame boundary.
struct DeploymentMap {
  std::vector<std::size_t> server;
  std::vector<std::int64_t> window_start;
  std::vector<std::int64_t> window_end;

  static DeploymentMap initial(std::vector<std::size_t> servers);

  std::size_t size() const { return server.size(); }
  std::int64_t window_length(std::size_t k) const { return window_end[k] - window_start[k]; }
};

/// Binds the new placement at frame boundary `clock.slot()`. MUs whose server
/// changes get the window [qT, qT + G_k); all others get an empty window.
/// Throws std::logic_error off a frame boundary and std::invalid_argument on
/// bad indices or G_k outside [0, T).
DeploymentMap apply_deployment(const DeploymentMap& current, std::span<const std::size_t> decision,
                               std::size_t num_servers, const TwoTimescaleClock& clock,
                               std::span<const std::int64_t> migration_slots);

bool is_blocked(std::size_t k, std::int64_t slot, const DeploymentMap& map);

}  // namespace dtmec::migration
