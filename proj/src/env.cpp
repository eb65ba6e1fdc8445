#include "dtmec/env.hpp"

#include <stdexcept>
#include <string>

#include "dtmec/lyapunov.hpp"

namespace dtmec::env {

std::vector<Vec2> WorldState::mu_positions() const {
  std::vector<Vec2> out;
  out.reserve(mobility.size());
  for (const auto& s : mobility) out.push_back(s.position);
  return out;
}

Environment::Environment(NetworkConfig config) : config_(std::move(config)) {
  config_.validate();
}

ObservationScale Environment::observation_scale() const {
  return {config_.mus(),         config_.bss(),
          config_.area_width,    config_.data_bits_max,
          config_.cycles_per_bit_max, config_.slot_length};
}

std::vector<AgentObservation> Environment::reset(std::uint64_t seed) {
  rng_.seed(seed);
  const std::size_t kk = config_.mus();
  WorldState w;
  w.clock = migration::TwoTimescaleClock(config_.frame_length, config_.num_frames);
  w.bs_positions = config_.resolved_bs_positions();

  const mobility::MobilityParams shared = config_.mobility_params();
  std::uniform_real_distribution<double> mean_speed(config_.mean_speed_min,
                                                    config_.mean_speed_max);
  w.mobility_params.assign(kk, shared);
  for (auto& p : w.mobility_params) {
    p.mean_speed = config_.mean_speed_min == config_.mean_speed_max ? config_.mean_speed_min
                                                                    : mean_speed(rng_);
  }
  w.mobility.reserve(kk);
  for (std::size_t k = 0; k < kk; ++k) {
    w.mobility.push_back(mobility::init_mobility(w.mobility_params[k], rng_));
  }

  std::vector<std::size_t> nearest(kk);
  w.association.assign(kk, 0);
  for (std::size_t k = 0; k < kk; ++k) {
    nearest[k] = nearest_index(w.mobility[k].position, w.bs_positions);
    w.association[k] = static_cast<int>(nearest[k]);
  }
  w.deployment = migration::DeploymentMap::initial(nearest);
  w.backlog.assign(kk, 0.0);
  w.backlog_frame_start.assign(kk, 0.0);

  const std::vector<double> probs(kk, config_.request_prob);
  w.requests = dtsync::draw_requests(probs, config_.request_params(), rng_);

  world_ = std::move(w);
  started_ = true;
  return observations();
}

std::vector<AgentObservation> Environment::observations() const {
  const std::size_t kk = config_.mus();
  const std::size_t mm = config_.bss();
  const WorldState& w = world_;
  const std::vector<Vec2> mu_pos = w.mu_positions();

  std::vector<AgentObservation> out;
  out.reserve(num_agents());
  for (std::size_t k = 0; k < kk; ++k) {
    out.emplace_back(MuObservation{k, mu_pos[k], w.bs_positions, w.requests[k]});
  }
  for (std::size_t m = 0; m < mm; ++m) {
    BsObservation bs;
    bs.index = m;
    bs.bs_positions = w.bs_positions;
    bs.mus.resize(kk);
    for (std::size_t k = 0; k < kk; ++k) {
      BsMuView& v = bs.mus[k];
      v.relay.assign(mm, 0);
      if (!w.requests[k].active) continue;
      v.requesting = true;
      v.served = static_cast<std::size_t>(w.association[k]) == m;
      v.hosted = w.deployment.server[k] == m;
      v.position = mu_pos[k];
      v.request = w.requests[k];
      if (v.served && !v.hosted) v.relay[w.deployment.server[k]] = 1;
    }
    out.emplace_back(std::move(bs));
  }
  CenterObservation cc;
  cc.frame_phase = static_cast<double>(w.clock.slot_in_frame()) /
                   static_cast<double>(w.clock.frame_length());
  cc.association = w.association;
  cc.bs_positions = w.bs_positions;
  cc.mu_positions = mu_pos;
  cc.deployment = w.deployment.server;
  out.emplace_back(std::move(cc));
  return out;
}

std::vector<double> Environment::global_state() const {
  const ObservationScale s = observation_scale();
  std::vector<double> state;
  for (const auto& obs : observations()) {
    const std::vector<double> part = flatten(obs, s);
    state.insert(state.end(), part.begin(), part.end());
  }
  return state;
}

namespace {

void check_unit(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(what + " outside [0, 1]");
}

}  // namespace

void Environment::validate_actions(std::span<const AgentAction> actions) const {
  const std::size_t kk = config_.mus();
  const std::size_t mm = config_.bss();
  if (actions.size() != num_agents()) {
    throw std::invalid_argument("expected " + std::to_string(num_agents()) + " actions, got " +
                                std::to_string(actions.size()));
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string who = "agent " + std::to_string(i);
    const AgentKind expected = i < kk ? AgentKind::kMu : i < kk + mm ? AgentKind::kBs
                                                                     : AgentKind::kCenter;
    if (kind_of(actions[i]) != expected) {
      throw std::invalid_argument(who + ": expected a " + to_string(expected) + " action");
    }
    if (const auto* mu = std::get_if<MuAction>(&actions[i])) {
      if (mu->bs >= mm) throw std::invalid_argument(who + ": BS index out of range");
      check_unit(mu->power, who + ": power");
    } else if (const auto* bs = std::get_if<BsAction>(&actions[i])) {
      if (bs->compute.size() != kk || bs->wired.size() != kk) {
        throw std::invalid_argument(who + ": weight vectors must have one entry per MU");
      }
      for (double v : bs->compute) check_unit(v, who + ": compute weight");
      for (double v : bs->wired) check_unit(v, who + ": wired weight");
    } else {
      const auto& cc = std::get<CenterAction>(actions[i]);
      if (cc.deployment.size() != kk) {
        throw std::invalid_argument(who + ": deployment must have one entry per MU");
      }
      for (std::size_t b : cc.deployment) {
        if (b >= mm) throw std::invalid_argument(who + ": server index out of range");
      }
    }
  }
}

StepResult Environment::step(std::span<const AgentAction> actions) {
  if (!started_) throw std::logic_error("step called before reset");
  if (world_.clock.done()) throw std::logic_error("step called after the episode ended");
  validate_actions(actions);

  const NetworkConfig& c = config_;
  const std::size_t kk = c.mus();
  const std::size_t mm = c.bss();
  WorldState& w = world_;
  const std::int64_t n = w.clock.slot();
  const auto& center = std::get<CenterAction>(actions[center_agent(c)]);
  auto bs_action = [&](std::size_t m) -> const BsAction& {
    return std::get<BsAction>(actions[bs_agent(c, m)]);
  };

  // (1) Frame boundary: bind the centre's placement and freeze Y[qT].
  if (w.clock.is_frame_start()) {
    const std::vector<std::int64_t> g(kk, c.migration_slots);
    w.deployment = migration::apply_deployment(w.deployment, center.deployment, mm, w.clock, g);
    w.backlog_frame_start = w.backlog;
  }

  SlotOutcome out;
  out.slot = n;
  out.frame = w.clock.frame();
  SlotTrace& tr = out.trace;
  tr.requests = w.requests;
  tr.deployment = w.deployment.server;
  tr.center_choice = center.deployment;
  tr.backlog_frame_start = w.backlog_frame_start;

  // (2)-(3) Association, power, blackout and resource projections.
  tr.association.resize(kk);
  tr.power.resize(kk);
  tr.blocked.resize(kk);
  tr.transmitting.resize(kk);
  for (std::size_t k = 0; k < kk; ++k) {
    const auto& mu = std::get<MuAction>(actions[mu_agent(k)]);
    tr.association[k] = static_cast<int>(mu.bs);
    tr.power[k] = scale_action(mu.power, 0.0, c.max_power);
    tr.blocked[k] = migration::is_blocked(k, n, w.deployment);
    tr.transmitting[k] = w.requests[k].active && !tr.blocked[k];
  }

  Matrix raw_compute(kk, mm, 0.0);
  radio::WiredTopology topology = radio::uniform_topology(mm, kk, c.wired_capacity);
  std::vector<double> raw_wired(mm * mm * kk, 0.0);
  auto wired_index = [&](std::size_t i, std::size_t j, std::size_t k) {
    return (i * mm + j) * kk + k;
  };
  for (std::size_t k = 0; k < kk; ++k) {
    if (!tr.transmitting[k]) continue;
    const std::size_t host = w.deployment.server[k];
    const auto serving = static_cast<std::size_t>(tr.association[k]);
    raw_compute(k, host) = scale_action(bs_action(host).compute[k], 0.0, c.max_cpu_hz);
    if (serving != host) {
      topology.set_relay(k, serving, host);
      raw_wired[wired_index(serving, host, k)] =
          scale_action(bs_action(serving).wired[k], 0.0, topology.capacity(serving, host));
    }
  }
  const std::vector<double> f_max(mm, c.max_cpu_hz);
  const dtsync::ComputeAllocation compute = dtsync::project_compute(raw_compute, f_max);
  topology = radio::project_wired_allocations(raw_wired, topology);

  // (4) Channels, rates, delays, failures, energy.
  const std::vector<Vec2> mu_pos = w.mu_positions();
  const radio::ChannelParams cp = c.channel_params();
  const radio::ChannelMatrix channel = radio::draw_channels(mu_pos, w.bs_positions, cp, rng_);
  tr.channel_gain = Matrix(kk, mm);
  for (std::size_t k = 0; k < kk; ++k) {
    for (std::size_t m = 0; m < mm; ++m) tr.channel_gain(k, m) = channel.power_gain(k, m);
  }

  tr.sinr.assign(kk, 0.0);
  tr.uplink_rate.assign(kk, 0.0);
  tr.wired_rate.assign(kk, 0.0);
  tr.compute_hz.assign(kk, 0.0);
  out.delay.assign(kk, 0.0);
  out.failure.assign(kk, 0);
  out.energy.assign(kk, 0.0);
  for (std::size_t k = 0; k < kk; ++k) {
    const dtsync::SyncRequest& req = w.requests[k];
    if (!req.active) continue;
    if (tr.blocked[k]) {
      out.delay[k] = dtsync::kUnreachable;
      out.failure[k] = dtsync::failure_indicator(req, out.delay[k], true);
      continue;
    }
    const std::size_t host = w.deployment.server[k];
    const bool relayed = static_cast<std::size_t>(tr.association[k]) != host;
    tr.sinr[k] = radio::sinr(k, channel, tr.association, tr.power, tr.transmitting, cp);
    tr.uplink_rate[k] = radio::rate_from_sinr(tr.sinr[k], cp.bandwidth);
    tr.wired_rate[k] = radio::wired_rate(k, topology);
    tr.compute_hz[k] = compute(k, host);
    out.delay[k] =
        dtsync::sync_delay(req, tr.uplink_rate[k], tr.wired_rate[k], tr.compute_hz[k], relayed);
    out.failure[k] = dtsync::failure_indicator(req, out.delay[k], false);
    out.energy[k] = dtsync::energy(tr.power[k], req, tr.uplink_rate[k], c.slot_length);
  }

  // (5) Centre reward for its per-slot placement choice, evaluated as if MU k's
  // DT sat on that server: relay leg plus processing only.
  tr.center_cost.assign(kk, 0.0);
  double center_sum = 0.0;
  for (std::size_t k = 0; k < kk; ++k) {
    const dtsync::SyncRequest& req = w.requests[k];
    if (!req.active) continue;
    const std::size_t target = center.deployment[k];
    const auto serving = static_cast<std::size_t>(tr.association[k]);
    const double raw_f = bs_action(target).compute[k] * c.max_cpu_hz;
    double other_compute = 0.0;
    for (std::size_t i = 0; i < kk; ++i) {
      if (i != k) other_compute += raw_compute(i, target);
    }
    const double f = dtsync::proportional_share(raw_f, other_compute, c.max_cpu_hz);
    double cost = 0.0;
    bool reachable = f > 0.0;
    if (reachable && serving != target) {
      const double cap = topology.capacity(serving, target);
      double others = 0.0;
      for (std::size_t i = 0; i < kk; ++i) {
        if (i != k) others += raw_wired[wired_index(serving, target, i)];
      }
      const double wk = dtsync::proportional_share(bs_action(serving).wired[k] * cap, others, cap);
      reachable = wk > 0.0;
      if (reachable) cost += req.data_bits / wk;
    }
    cost = reachable ? cost + req.data_bits * req.cycles_per_bit / f : c.slot_length;
    tr.center_cost[k] = cost;
    center_sum += cost;
  }
  out.reward_center = -c.reward_scale * center_sum / static_cast<double>(kk);

  // (6)-(7) Queues and per-slot cost; Xi uses Y frozen at the frame start.
  out.backlog.resize(kk);
  out.cost.resize(kk);
  double cost_sum = 0.0;
  const double normalizer = c.cost_normalizer();
  for (std::size_t k = 0; k < kk; ++k) {
    w.backlog[k] = lyapunov::queue_step(w.backlog[k], out.failure[k], c.epsilon);
    out.backlog[k] = w.backlog[k];
    out.cost[k] = lyapunov::per_slot_cost(out.energy[k], w.backlog_frame_start[k], out.failure[k],
                                          c.epsilon, c.eta, normalizer);
    cost_sum += out.cost[k];
  }
  out.reward_global = -c.reward_scale * cost_sum;

  // (8) Mobility, clock, next slot's requests.
  w.association = tr.association;
  for (std::size_t k = 0; k < kk; ++k) {
    w.mobility[k] = mobility::step_mobility(w.mobility[k], w.mobility_params[k], rng_);
  }
  w.clock.advance();
  if (w.clock.done()) {
    w.requests.assign(kk, dtsync::SyncRequest{});
  } else {
    const std::vector<double> probs(kk, c.request_prob);
    w.requests = dtsync::draw_requests(probs, c.request_params(), rng_);
  }
  out.done = w.clock.done();

  return StepResult{observations(), std::move(out)};
}

}  // namespace dtmec::env
