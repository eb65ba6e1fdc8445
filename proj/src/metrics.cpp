#include "dtmec/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace dtmec::harness {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void RunningTotals::add(const env::SlotOutcome& outcome) {
  ++slots;
  for (std::size_t k = 0; k < outcome.failure.size(); ++k) {
    if (outcome.trace.requests[k].active) ++requests;
    failures += outcome.failure[k];
    energy += outcome.energy[k];
    backlog += outcome.backlog[k];
  }
}

namespace {

double per_mu_slot(double total, std::int64_t slots, std::size_t num_mus) {
  if (slots == 0 || num_mus == 0) return 0.0;
  return total / (static_cast<double>(slots) * static_cast<double>(num_mus));
}

}  // namespace

double RunningTotals::average_energy(std::size_t num_mus) const {
  return per_mu_slot(energy, slots, num_mus);
}

double RunningTotals::failure_ratio(std::size_t num_mus) const {
  return per_mu_slot(static_cast<double>(failures), slots, num_mus);
}

double RunningTotals::mean_backlog(std::size_t num_mus) const {
  return per_mu_slot(backlog, slots, num_mus);
}

SlotCsvWriter::SlotCsvWriter(std::ostream& out) : out_(out) {
  out_ << "episode,slot,mu,t,X,E,Xi,Y,r_g,r_c\n";
}

void SlotCsvWriter::write(std::int64_t episode, const env::SlotOutcome& o) {
  const std::string rg = format_double(o.reward_global);
  const std::string rc = format_double(o.reward_center);
  for (std::size_t k = 0; k < o.failure.size(); ++k) {
    out_ << episode << ',' << o.slot << ',' << k << ',' << format_double(o.delay[k]) << ','
         << o.failure[k] << ',' << format_double(o.energy[k]) << ',' << format_double(o.cost[k])
         << ',' << format_double(o.backlog[k]) << ',' << rg << ',' << rc << '\n';
  }
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

namespace {

nlohmann::json doubles(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

nlohmann::json bools(const std::vector<bool>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (bool b : v) a.push_back(b);
  return a;
}

}  // namespace

nlohmann::json slot_record(std::int64_t episode, const env::SlotOutcome& o,
                           const RunningTotals& totals, std::size_t num_mus) {
  const env::SlotTrace& tr = o.trace;
  nlohmann::json requests = nlohmann::json::array();
  for (const auto& r : tr.requests) {
    if (r.active) {
      requests.push_back({{"D", r.data_bits}, {"C", r.cycles_per_bit}, {"tau", r.deadline}});
    } else {
      requests.push_back(nullptr);
    }
  }
  nlohmann::json gains = nlohmann::json::array();
  for (std::size_t k = 0; k < tr.channel_gain.rows(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t m = 0; m < tr.channel_gain.cols(); ++m) row.push_back(tr.channel_gain(k, m));
    gains.push_back(std::move(row));
  }
  return {
      {"episode", episode},
      {"slot", o.slot},
      {"frame", o.frame},
      {"t", doubles(o.delay)},
      {"X", o.failure},
      {"E", doubles(o.energy)},
      {"Xi", doubles(o.cost)},
      {"Y", doubles(o.backlog)},
      {"r_g", o.reward_global},
      {"r_c", o.reward_center},
      {"done", o.done},
      {"trace",
       {{"requests", requests},
        {"association", tr.association},
        {"power", doubles(tr.power)},
        {"blocked", bools(tr.blocked)},
        {"transmitting", bools(tr.transmitting)},
        {"deployment", tr.deployment},
        {"channel_gain", gains},
        {"sinr", doubles(tr.sinr)},
        {"uplink_rate", doubles(tr.uplink_rate)},
        {"wired_rate", doubles(tr.wired_rate)},
        {"compute_hz", doubles(tr.compute_hz)},
        {"center_choice", tr.center_choice},
        {"center_cost", doubles(tr.center_cost)},
        {"Y_frame_start", doubles(tr.backlog_frame_start)}}},
      {"running",
       {{"average_energy", totals.average_energy(num_mus)},
        {"failure_ratio", totals.failure_ratio(num_mus)},
        {"mean_Y", totals.mean_backlog(num_mus)}}},
  };
}

void SlotJsonlWriter::write(std::int64_t episode, const env::SlotOutcome& outcome,
                            const RunningTotals& totals, std::size_t num_mus) {
  out_ << slot_record(episode, outcome, totals, num_mus).dump() << '\n';
}

}  // namespace dtmec::harness
