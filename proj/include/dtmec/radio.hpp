#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dtmec/types.hpp"

namespace dtmec::radio {

struct ChannelParams {
  double ref_gain = 1e-3;        // linear channel power gain at 1 m
  double path_loss_exponent = 2.0;
  double rician_factor = 10.0;   // linear LoS/NLoS power ratio
  double noise_power = 1e-9;     // W
  double bandwidth = 1e7;        // Hz

  void validate() const;
};

/// K x M complex gains, MU-major.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(std::size_t num_mus, std::size_t num_bs)
      : num_mus_(num_mus), num_bs_(num_bs), gains_(num_mus * num_bs) {}

  std::complex<double>& at(std::size_t k, std::size_t m) { return gains_[k * num_bs_ + m]; }
  const std::complex<double>& at(std::size_t k, std::size_t m) const {
    return gains_[k * num_bs_ + m];
  }
  double power_gain(std::size_t k, std::size_t m) const { return std::norm(at(k, m)); }

  std::size_t num_mus() const { return num_mus_; }
  std::size_t num_bs() const { return num_bs_; }

 private:
  std::size_t num_mus_ = 0;
  std::size_t num_bs_ = 0;
  std::vector<std::complex<double>> gains_;
};

/// Serving BS per MU; kNoAssociation marks an unassociated MU.
inline constexpr int kNoAssociation = -1;
using Association = std::vector<int>;

/// Distances below this are clamped before applying path loss.
inline constexpr double kMinDistance = 1.0;

/// Rician draw for every MU/BS pair: sqrt(rho0/d^phi) * (sqrt(k/(k+1)) + sqrt(1/(k+1)) h_nlos),
/// h_nlos ~ CN(0, 1).
ChannelMatrix draw_channels(std::span<const Vec2> mu_positions, std::span<const Vec2> bs_positions,
                            const ChannelParams& params, Rng& rng);

/// Uplink SINR of MU k at its serving BS. Interference comes from every other
/// MU flagged in `transmitting`, received at k's serving BS.
double sinr(std::size_t k, const ChannelMatrix& channel, const Association& assoc,
            std::span<const double> powers, const std::vector<bool>& transmitting,
            const ChannelParams& params);

/// Shannon rate B*log2(1 + sinr).
double rate_from_sinr(double sinr_value, double bandwidth);

double uplink_rate(std::size_t k, const ChannelMatrix& channel, const Association& assoc,
                   std::span<const double> powers, const std::vector<bool>& transmitting,
                   const ChannelParams& params);

/// Backbone state between BSs: per-link capacities, per-(link, MU) allocated
/// rates and relay flags.
class WiredTopology {
 public:
  WiredTopology() = default;
  WiredTopology(Matrix capacities, std::size_t num_mus);

  std::size_t num_bs() const { return capacities_.rows(); }
  std::size_t num_mus() const { return num_mus_; }

  double capacity(std::size_t i, std::size_t j) const { return capacities_(i, j); }
  const Matrix& capacities() const { return capacities_; }

  double allocation(std::size_t i, std::size_t j, std::size_t k) const {
    return alloc_[index(i, j, k)];
  }
  void set_allocation(std::size_t i, std::size_t j, std::size_t k, double rate) {
    alloc_[index(i, j, k)] = rate;
  }

  bool relay(std::size_t k, std::size_t i, std::size_t j) const {
    return relay_[index(i, j, k)] != 0;
  }
  /// Marks MU k as relayed over (i, j), clearing any other pair for that MU.
  void set_relay(std::size_t k, std::size_t i, std::size_t j);
  void clear_relay(std::size_t k);

  /// Sum over MUs of relay * allocation on link (i, j).
  double link_load(std::size_t i, std::size_t j) const;

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return (i * capacities_.cols() + j) * num_mus_ + k;
  }

  Matrix capacities_;
  std::size_t num_mus_ = 0;
  std::vector<double> alloc_;
  std::vector<unsigned char> relay_;
};

/// Full-mesh topology with the same capacity on every ordered pair i != j.
WiredTopology uniform_topology(std::size_t num_bs, std::size_t num_mus, double capacity);

/// w_k = sum over (i, j) of relay flag times allocation.
double wired_rate(std::size_t k, const WiredTopology& topology);

/// Replaces allocations with `raw` (same (i, j, k) layout as the topology),
/// scaling each link down proportionally when its summed weight exceeds capacity.
/// Relay flags are kept.
WiredTopology project_wired_allocations(std::span<const double> raw, const WiredTopology& topology);

}  // namespace dtmec::radio
