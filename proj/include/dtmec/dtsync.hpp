#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "dtmec/types.hpp"

namespace dtmec::dtsync {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// One slot's synchronization request of a single MU. Inactive requests carry zeros.
struct SyncRequest {
  bool active = false;
  double data_bits = 0.0;       // D
  double cycles_per_bit = 0.0;  // C
  double deadline = 0.0;        // tau, seconds, strictly below the slot length

  friend bool operator==(const SyncRequest&, const SyncRequest&) = default;
};

struct RequestParams {
  double data_bits_min = 15e3;
  double data_bits_max = 25e3;
  double cycles_per_bit_min = 550.0;
  double cycles_per_bit_max = 700.0;
  // Deadline drawn as Uniform[min_frac, max_frac) * slot_length.
  double deadline_min_frac = 0.5;
  double deadline_max_frac = 1.0;
  double slot_length = 0.05;

  void validate() const;
};

/// Bernoulli arrivals per MU; payload drawn only for active requests.
std::vector<SyncRequest> draw_requests(std::span<const double> request_prob,
                                       const RequestParams& params, Rng& rng);

/// End-to-end delay: upload, optional backbone relay, then processing at the
/// DT's server. Any zero rate on a needed leg yields kUnreachable.
/// Throws std::logic_error for an inactive request.
double sync_delay(const SyncRequest& request, double uplink_rate, double wired_rate,
                  double compute_hz, bool relayed);

/// 1 when an active request is blocked by migration or misses its deadline.
int failure_indicator(const SyncRequest& request, double delay, bool blocked);

/// Transmit energy p*D/R. A transmitting MU with zero rate burns p for the whole slot.
double energy(double power, const SyncRequest& request, double rate, double slot_length);

/// K x M CPU frequencies (cycles/s).
using ComputeAllocation = Matrix;

/// Per server column, scales the raw frequencies down proportionally when
/// their sum exceeds that server's capacity.
ComputeAllocation project_compute(const Matrix& raw, std::span<const double> f_max);

/// Share a newcomer with weight `raw` would receive on a resource of
/// `capacity` that already carries `others` under proportional scaling.
double proportional_share(double raw, double others, double capacity);

}  // namespace dtmec::dtsync
