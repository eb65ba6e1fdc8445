#include "dtmec/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtmec::lyapunov {

double queue_step(double backlog, int failure, double epsilon) {
  return std::max(backlog + static_cast<double>(failure) - epsilon, 0.0);
}

double per_slot_cost(double energy, double backlog_frame_start, int failure, double epsilon,
                     double eta, double normalizer) {
  return energy / normalizer +
         eta * backlog_frame_start * (static_cast<double>(failure) - epsilon);
}

double slot_drift_constant(double request_prob, double epsilon) {
  return 0.5 * (request_prob + epsilon * epsilon);
}

double frame_drift_constant(double request_prob, double epsilon, std::int64_t frame_length) {
  return slot_drift_constant(request_prob, epsilon) +
         static_cast<double>(frame_length - 1) *
             ((1.0 - epsilon) * request_prob + epsilon * epsilon) / 2.0;
}

QueueTrace QueueTrace::from_failures(std::vector<int> failures, double epsilon) {
  QueueTrace t;
  t.backlog.reserve(failures.size() + 1);
  t.backlog.push_back(0.0);
  for (int x : failures) t.backlog.push_back(queue_step(t.backlog.back(), x, epsilon));
  t.failures = std::move(failures);
  return t;
}

bool DriftBoundReport::ordered(double min_sigmas) const {
  return frames > 0 && mean_drift <= mean_bound1 && mean_bound1 <= mean_bound2 &&
         gap1.sigmas >= min_sigmas && gap2.sigmas >= min_sigmas;
}

namespace {

GapStats gap_stats(const std::vector<double>& hi, const std::vector<double>& lo) {
  GapStats g;
  const std::size_t n = hi.size();
  if (n == 0) return g;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += hi[i] - lo[i];
  g.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = hi[i] - lo[i] - g.mean;
    ss += d * d;
  }
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  g.std_error = std::sqrt(var / static_cast<double>(n));
  if (g.std_error > 0.0) {
    g.sigmas = g.mean / g.std_error;
  } else {
    g.sigmas = g.mean > 0.0   ? std::numeric_limits<double>::infinity()
               : g.mean < 0.0 ? -std::numeric_limits<double>::infinity()
                              : 0.0;
  }
  return g;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

DriftBoundReport verify_drift_bounds(std::span<const QueueTrace> traces, double request_prob,
                                     double epsilon, std::int64_t frame_length) {
  if (frame_length < 1) throw std::invalid_argument("verify_drift_bounds: frame length < 1");
  DriftBoundReport r;
  r.b1 = slot_drift_constant(request_prob, epsilon);
  r.b2 = frame_drift_constant(request_prob, epsilon, frame_length);
  const auto t_len = static_cast<std::size_t>(frame_length);
  const double t_d = static_cast<double>(frame_length);

  for (const QueueTrace& trace : traces) {
    if (trace.backlog.size() != trace.failures.size() + 1) {
      throw std::invalid_argument("verify_drift_bounds: backlog/failure length mismatch");
    }
    const std::size_t frames = trace.failures.size() / t_len;
    for (std::size_t q = 0; q < frames; ++q) {
      const std::size_t start = q * t_len;
      const double y0 = trace.backlog[start];
      const double y1 = trace.backlog[start + t_len];
      double weighted = 0.0;  // sum Y[n](X[n] - eps)
      double excess = 0.0;    // sum (X[n] - eps)
      for (std::size_t n = start; n < start + t_len; ++n) {
        const double dev = static_cast<double>(trace.failures[n]) - epsilon;
        weighted += trace.backlog[n] * dev;
        excess += dev;
      }
      r.drift.push_back(0.5 * (y1 * y1 - y0 * y0));
      r.bound1.push_back(r.b1 * t_d + weighted);
      r.bound2.push_back(r.b2 * t_d + y0 * excess);

      for (std::size_t n = start; n <= start + t_len; ++n) {
        const double offset = static_cast<double>(n - start);
        const double lo = y0 - offset * epsilon;
        const double hi = y0 + offset * (1.0 - epsilon);
        // Rounding slack only; epsilon itself is not exactly representable.
        const double slack = 1e-9 * (1.0 + std::abs(y0) + offset);
        const double y = trace.backlog[n];
        ++r.slots_checked;
        if (y < lo - slack || y > hi + slack) ++r.envelope_violations;
      }
    }
  }
  r.frames = r.drift.size();
  r.mean_drift = mean_of(r.drift);
  r.mean_bound1 = mean_of(r.bound1);
  r.mean_bound2 = mean_of(r.bound2);
  r.gap1 = gap_stats(r.bound1, r.drift);
  r.gap2 = gap_stats(r.bound2, r.bound1);
  return r;
}

std::vector<QueueTrace> simulate_bernoulli_traces(std::size_t num_traces,
                                                  std::size_t frames_per_trace,
                                                  std::int64_t frame_length, double failure_prob,
                                                  double epsilon, std::mt19937_64& rng) {
  if (frame_length < 1) throw std::invalid_argument("simulate_bernoulli_traces: frame length < 1");
  std::bernoulli_distribution fail(failure_prob);
  const std::size_t slots = frames_per_trace * static_cast<std::size_t>(frame_length);
  std::vector<QueueTrace> traces;
  traces.reserve(num_traces);
  for (std::size_t i = 0; i < num_traces; ++i) {
    std::vector<int> x(slots);
    for (int& v : x) v = fail(rng) ? 1 : 0;
    traces.push_back(QueueTrace::from_failures(std::move(x), epsilon));
  }
  return traces;
}

bool mean_rate_stable(std::span<const double> backlog, std::size_t window, double tolerance) {
  if (backlog.size() < 2) return true;
  const std::size_t first = backlog.size() > window ? backlog.size() - window : 1;
  double worst = 0.0;
  for (std::size_t n = std::max<std::size_t>(first, 1); n < backlog.size(); ++n) {
    worst = std::max(worst, backlog[n] / static_cast<double>(n));
  }
  return worst < tolerance;
}

}  // namespace dtmec::lyapunov
