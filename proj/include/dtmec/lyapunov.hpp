#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dtmec::lyapunov {

/// Y' = max(Y + X - eps, 0).
double queue_step(double backlog, int failure, double epsilon);

/// E / normalizer + eta * Y_frame_start * (X - eps). `normalizer` is Q*K*T.
double per_slot_cost(double energy, double backlog_frame_start, int failure, double epsilon,
                     double eta, double normalizer);

/// Drift-bound constants for one queue.
double slot_drift_constant(double request_prob, double epsilon);
double frame_drift_constant(double request_prob, double epsilon, std::int64_t frame_length);

/// Failure indicators and the queue they drove. `backlog` has one more entry
/// than `failures`: backlog[n] is the queue at the start of slot n.
/// The trace starts on a frame boundary.
struct QueueTrace {
  std::vector<int> failures;
  std::vector<double> backlog;

  /// Builds the backlog by iterating queue_step from zero.
  static QueueTrace from_failures(std::vector<int> failures, double epsilon);
};

struct GapStats {
  double mean = 0.0;
  double std_error = 0.0;
  /// mean / std_error; +inf for a positive gap with zero spread.
  double sigmas = 0.0;
};

struct DriftBoundReport {
  double b1 = 0.0;
  double b2 = 0.0;
  std::size_t frames = 0;

  // Per-frame drift 0.5*(Y[(q+1)T]^2 - Y[qT]^2) and both right-hand sides.
  std::vector<double> drift;
  std::vector<double> bound1;
  std::vector<double> bound2;

  double mean_drift = 0.0;
  double mean_bound1 = 0.0;
  double mean_bound2 = 0.0;
  GapStats gap1;  // bound1 - drift
  GapStats gap2;  // bound2 - bound1

  std::size_t slots_checked = 0;
  std::size_t envelope_violations = 0;

  /// Mean ordering drift <= bound1 <= bound2 with at least `min_sigmas` on each gap.
  bool ordered(double min_sigmas) const;
};

/// Evaluates both drift bounds frame by frame over every complete frame of
/// every trace and checks the per-slot envelope
/// Y[qT] - (n - qT) eps <= Y[n] <= Y[qT] + (n - qT)(1 - eps).
/// Violations are counted, never thrown.
DriftBoundReport verify_drift_bounds(std::span<const QueueTrace> traces, double request_prob,
                                     double epsilon, std::int64_t frame_length);

/// Independent queues driven by i.i.d. Bernoulli(failure_prob) failures, each
/// `frames_per_trace` frames long and starting empty.
std::vector<QueueTrace> simulate_bernoulli_traces(std::size_t num_traces,
                                                  std::size_t frames_per_trace,
                                                  std::int64_t frame_length, double failure_prob,
                                                  double epsilon, std::mt19937_64& rng);

/// Mean-rate stability diagnostic: max of Y[n]/n over the trailing `window`
/// slots stays below `tolerance`.
bool mean_rate_stable(std::span<const double> backlog, std::size_t window, double tolerance);

}  // namespace dtmec::lyapunov
