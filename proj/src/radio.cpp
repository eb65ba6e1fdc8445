#include "dtmec/radio.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dtmec::radio {

void ChannelParams::validate() const {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("invalid channel parameter: ") + field);
  };
  require(ref_gain > 0.0, "ref_gain");
  require(path_loss_exponent >= 2.0, "path_loss_exponent");
  require(rician_factor >= 0.0, "rician_factor");
  require(noise_power > 0.0, "noise_power");
  require(bandwidth > 0.0, "bandwidth");
}

ChannelMatrix draw_channels(std::span<const Vec2> mu_positions, std::span<const Vec2> bs_positions,
                            const ChannelParams& params, Rng& rng) {
  ChannelMatrix h(mu_positions.size(), bs_positions.size());
  // Each component of CN(0, 1) carries half the unit variance.
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  const double kappa = params.rician_factor;
  const double los_weight = std::isinf(kappa) ? 1.0 : std::sqrt(kappa / (kappa + 1.0));
  const double nlos_weight = std::isinf(kappa) ? 0.0 : std::sqrt(1.0 / (kappa + 1.0));
  for (std::size_t k = 0; k < mu_positions.size(); ++k) {
    for (std::size_t m = 0; m < bs_positions.size(); ++m) {
      const double d = std::max(distance(mu_positions[k], bs_positions[m]), kMinDistance);
      const double amplitude = std::sqrt(params.ref_gain / std::pow(d, params.path_loss_exponent));
      const double re = component(rng);
      const double im = component(rng);
      h.at(k, m) = amplitude * (std::complex<double>(los_weight, 0.0) +
                                nlos_weight * std::complex<double>(re, im));
    }
  }
  return h;
}

double sinr(std::size_t k, const ChannelMatrix& channel, const Association& assoc,
            std::span<const double> powers, const std::vector<bool>& transmitting,
            const ChannelParams& params) {
  if (k >= assoc.size() || assoc[k] == kNoAssociation) {
    throw std::invalid_argument("sinr: MU " + std::to_string(k) + " has no association");
  }
  const auto serving = static_cast<std::size_t>(assoc[k]);
  double interference = 0.0;
  for (std::size_t i = 0; i < assoc.size(); ++i) {
    if (i == k || !transmitting[i]) continue;
    interference += powers[i] * channel.power_gain(i, serving);
  }
  return powers[k] * channel.power_gain(k, serving) / (interference + params.noise_power);
}

double rate_from_sinr(double sinr_value, double bandwidth) {
  return bandwidth * std::log2(1.0 + sinr_value);
}

double uplink_rate(std::size_t k, const ChannelMatrix& channel, const Association& assoc,
                   std::span<const double> powers, const std::vector<bool>& transmitting,
                   const ChannelParams& params) {
  return rate_from_sinr(sinr(k, channel, assoc, powers, transmitting, params), params.bandwidth);
}

WiredTopology::WiredTopology(Matrix capacities, std::size_t num_mus)
    : capacities_(std::move(capacities)), num_mus_(num_mus) {
  if (capacities_.rows() != capacities_.cols()) {
    throw std::invalid_argument("wired topology: capacity matrix must be square");
  }
  for (double c : capacities_.data()) {
    if (!(c >= 0.0)) throw std::invalid_argument("wired topology: negative capacity");
  }
  const std::size_t n = capacities_.rows() * capacities_.cols() * num_mus_;
  alloc_.assign(n, 0.0);
  relay_.assign(n, 0);
}

void WiredTopology::set_relay(std::size_t k, std::size_t i, std::size_t j) {
  clear_relay(k);
  relay_[index(i, j, k)] = 1;
}

void WiredTopology::clear_relay(std::size_t k) {
  for (std::size_t i = 0; i < num_bs(); ++i) {
    for (std::size_t j = 0; j < num_bs(); ++j) relay_[index(i, j, k)] = 0;
  }
}

double WiredTopology::link_load(std::size_t i, std::size_t j) const {
  double load = 0.0;
  for (std::size_t k = 0; k < num_mus_; ++k) {
    if (relay(k, i, j)) load += allocation(i, j, k);
  }
  return load;
}

WiredTopology uniform_topology(std::size_t num_bs, std::size_t num_mus, double capacity) {
  Matrix caps(num_bs, num_bs, capacity);
  for (std::size_t i = 0; i < num_bs; ++i) caps(i, i) = 0.0;
  return WiredTopology(std::move(caps), num_mus);
}

double wired_rate(std::size_t k, const WiredTopology& topology) {
  double w = 0.0;
  for (std::size_t i = 0; i < topology.num_bs(); ++i) {
    for (std::size_t j = 0; j < topology.num_bs(); ++j) {
      if (topology.relay(k, i, j)) w += topology.allocation(i, j, k);
    }
  }
  return w;
}

WiredTopology project_wired_allocations(std::span<const double> raw, const WiredTopology& topology) {
  const std::size_t m = topology.num_bs();
  const std::size_t kk = topology.num_mus();
  if (raw.size() != m * m * kk) {
    throw std::invalid_argument("project_wired_allocations: raw size mismatch");
  }
  WiredTopology out = topology;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double* row = raw.data() + (i * m + j) * kk;
      double total = 0.0;
      for (std::size_t k = 0; k < kk; ++k) {
        if (row[k] < 0.0) throw std::invalid_argument("project_wired_allocations: negative weight");
        total += row[k];
      }
      const double cap = topology.capacity(i, j);
      const double scale = total > cap ? cap / total : 1.0;
      for (std::size_t k = 0; k < kk; ++k) out.set_allocation(i, j, k, row[k] * scale);
    }
  }
  return out;
}

}  // namespace dtmec::radio
