#include "dtmec/agent_io.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dtmec::env {

const char* to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::kMu:
      return "mu";
    case AgentKind::kBs:
      return "bs";
    case AgentKind::kCenter:
      return "center";
  }
  return "unknown";
}

AgentKind kind_of(const AgentObservation& obs) {
  return static_cast<AgentKind>(obs.index());
}

AgentKind kind_of(const AgentAction& action) {
  return static_cast<AgentKind>(action.index());
}

std::size_t observation_dim(AgentKind kind, std::size_t num_mus, std::size_t num_bs) {
  switch (kind) {
    case AgentKind::kMu:
      return 3 + 2 * num_bs + 4;
    case AgentKind::kBs:
      return 1 + 2 * num_bs + num_mus * (8 + num_bs);
    case AgentKind::kCenter:
      return 1 + 2 * num_mus * num_bs + 2 * num_bs + 2 * num_mus;
  }
  return 0;
}

namespace {

double index_fraction(std::size_t i, std::size_t n) {
  return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
}

void push_point(std::vector<double>& out, const Vec2& p, double width) {
  out.push_back(p.x / width);
  out.push_back(p.y / width);
}

void push_request(std::vector<double>& out, const dtsync::SyncRequest& r,
                  const ObservationScale& s) {
  out.push_back(r.data_bits / s.data_bits_max);
  out.push_back(r.cycles_per_bit / s.cycles_per_bit_max);
  out.push_back(r.deadline / s.slot_length);
}

void push_one_hot(std::vector<double>& out, long hot, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<long>(i) == hot ? 1.0 : 0.0);
}

}  // namespace

std::vector<double> flatten(const AgentObservation& obs, const ObservationScale& s) {
  std::vector<double> out;
  const double w = s.area_width;
  if (const auto* mu = std::get_if<MuObservation>(&obs)) {
    out.reserve(observation_dim(AgentKind::kMu, s.num_mus, s.num_bs));
    out.push_back(index_fraction(mu->index, s.num_mus));
    push_point(out, mu->position, w);
    for (const Vec2& p : mu->bs_positions) push_point(out, p, w);
    out.push_back(mu->request.active ? 1.0 : 0.0);
    push_request(out, mu->request, s);
  } else if (const auto* bs = std::get_if<BsObservation>(&obs)) {
    out.reserve(observation_dim(AgentKind::kBs, s.num_mus, s.num_bs));
    out.push_back(index_fraction(bs->index, s.num_bs));
    push_point(out, bs->bs_positions[bs->index], w);
    for (std::size_t j = 0; j < bs->bs_positions.size(); ++j) {
      if (j != bs->index) push_point(out, bs->bs_positions[j], w);
    }
    for (const BsMuView& v : bs->mus) {
      out.push_back(v.requesting ? 1.0 : 0.0);
      out.push_back(v.served ? 1.0 : 0.0);
      out.push_back(v.hosted ? 1.0 : 0.0);
      push_point(out, v.position, w);
      push_request(out, v.request, s);
      for (std::size_t j = 0; j < s.num_bs; ++j) {
        out.push_back(j < v.relay.size() && v.relay[j] ? 1.0 : 0.0);
      }
    }
  } else {
    const auto& cc = std::get<CenterObservation>(obs);
    out.reserve(observation_dim(AgentKind::kCenter, s.num_mus, s.num_bs));
    out.push_back(cc.frame_phase);
    for (int a : cc.association) push_one_hot(out, a, s.num_bs);
    for (const Vec2& p : cc.bs_positions) push_point(out, p, w);
    for (const Vec2& p : cc.mu_positions) push_point(out, p, w);
    for (std::size_t b : cc.deployment) push_one_hot(out, static_cast<long>(b), s.num_bs);
  }
  return out;
}

double scale_action(double raw, double low, double high) {
  if (!(raw >= 0.0 && raw <= 1.0)) {
    throw std::out_of_range("raw action " + std::to_string(raw) + " outside [0, 1]");
  }
  return low + raw * (high - low);
}

std::size_t argmax_index(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax_index: empty scores");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::vector<AgentSpace> agent_spaces(std::size_t num_mus, std::size_t num_bs) {
  std::vector<AgentSpace> out;
  out.reserve(num_mus + num_bs + 1);
  for (std::size_t k = 0; k < num_mus; ++k) {
    out.push_back({AgentKind::kMu, observation_dim(AgentKind::kMu, num_mus, num_bs), {num_bs}, 1});
  }
  for (std::size_t m = 0; m < num_bs; ++m) {
    out.push_back(
        {AgentKind::kBs, observation_dim(AgentKind::kBs, num_mus, num_bs), {}, 2 * num_mus});
  }
  out.push_back({AgentKind::kCenter, observation_dim(AgentKind::kCenter, num_mus, num_bs),
                 std::vector<std::size_t>(num_mus, num_bs), 0});
  return out;
}

}  // namespace dtmec::env
