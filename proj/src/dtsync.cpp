#include "dtmec/dtsync.hpp"

#include <stdexcept>
#include <string>

namespace dtmec::dtsync {

void RequestParams::validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("invalid request parameter: ") + field);
  };
  require(data_bits_min > 0.0 && data_bits_min <= data_bits_max, "data_bits range");
  require(cycles_per_bit_min > 0.0 && cycles_per_bit_min <= cycles_per_bit_max,
          "cycles_per_bit range");
  require(deadline_min_frac > 0.0 && deadline_min_frac <= deadline_max_frac &&
              deadline_max_frac <= 1.0,
          "deadline fractions");
  require(slot_length > 0.0, "slot_length");
}

std::vector<SyncRequest> draw_requests(std::span<const double> request_prob,
                                       const RequestParams& params, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SyncRequest> out(request_prob.size());
  for (std::size_t k = 0; k < request_prob.size(); ++k) {
    const double lambda = request_prob[k];
    if (lambda < 0.0 || lambda > 1.0) {
      throw std::invalid_argument("draw_requests: probability outside [0, 1]");
    }
    if (!(unit(rng) < lambda)) continue;
    SyncRequest& r = out[k];
    r.active = true;
    r.data_bits = params.data_bits_min + (params.data_bits_max - params.data_bits_min) * unit(rng);
    r.cycles_per_bit =
        params.cycles_per_bit_min +
        (params.cycles_per_bit_max - params.cycles_per_bit_min) * unit(rng);
    const double frac = params.deadline_min_frac +
                        (params.deadline_max_frac - params.deadline_min_frac) * unit(rng);
    r.deadline = frac * params.slot_length;
    // unit() can round to the upper bound; the deadline must stay below one slot.
    if (r.deadline >= params.slot_length) r.deadline = std::nextafter(params.slot_length, 0.0);
  }
  return out;
}

double sync_delay(const SyncRequest& request, double uplink_rate, double wired_rate,
                  double compute_hz, bool relayed) {
  if (!request.active) throw std::logic_error("sync_delay: inactive request");
  if (!(uplink_rate > 0.0) || !(compute_hz > 0.0)) return kUnreachable;
  double t = request.data_bits / uplink_rate;
  if (relayed) {
    if (!(wired_rate > 0.0)) return kUnreachable;
    t += request.data_bits / wired_rate;
  }
  t += request.data_bits * request.cycles_per_bit / compute_hz;
  return t;
}

int failure_indicator(const SyncRequest& request, double delay, bool blocked) {
  if (!request.active) return 0;
  if (blocked) return 1;
  return delay > request.deadline ? 1 : 0;
}

double energy(double power, const SyncRequest& request, double rate, double slot_length) {
  if (!request.active || power == 0.0) return 0.0;
  if (!(rate > 0.0)) return power * slot_length;
  return power * request.data_bits / rate;
}

ComputeAllocation project_compute(const Matrix& raw, std::span<const double> f_max) {
  if (raw.cols() != f_max.size()) {
    throw std::invalid_argument("project_compute: server count mismatch");
  }
  ComputeAllocation out = raw;
  for (std::size_t m = 0; m < raw.cols(); ++m) {
    double total = 0.0;
    for (std::size_t k = 0; k < raw.rows(); ++k) {
      if (raw(k, m) < 0.0) throw std::invalid_argument("project_compute: negative weight");
      total += raw(k, m);
    }
    if (total <= f_max[m]) continue;
    const double scale = f_max[m] / total;
    for (std::size_t k = 0; k < raw.rows(); ++k) out(k, m) = raw(k, m) * scale;
  }
  return out;
}

double proportional_share(double raw, double others, double capacity) {
  const double total = raw + others;
  if (total <= capacity) return raw;
  return raw * (capacity / total);
}

}  // namespace dtmec::dtsync
