#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dtmec/env.hpp"

namespace dtmec::harness {

/// 17 significant digits, round-trip exact; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Running aggregates over all slots seen so far in one episode.
struct RunningTotals {
  std::int64_t slots = 0;
  std::int64_t requests = 0;
  std::int64_t failures = 0;
  double energy = 0.0;
  double backlog = 0.0;  // sum of Y over slots and MUs

  void add(const env::SlotOutcome& outcome);
  double average_energy(std::size_t num_mus) const;   // per MU per slot
  double failure_ratio(std::size_t num_mus) const;    // failures per MU per slot
  double mean_backlog(std::size_t num_mus) const;
};

/// Per-slot CSV, one row per (slot, MU):
/// episode,slot,mu,t,X,E,Xi,Y,r_g,r_c
class SlotCsvWriter {
 public:
  explicit SlotCsvWriter(std::ostream& out);
  void write(std::int64_t episode, const env::SlotOutcome& outcome);

 private:
  std::ostream& out_;
};

/// Full slot record, including the trace and running aggregates. Non-finite
/// delays are written as null.
nlohmann::json slot_record(std::int64_t episode, const env::SlotOutcome& outcome,
                           const RunningTotals& totals, std::size_t num_mus);

class SlotJsonlWriter {
 public:
  explicit SlotJsonlWriter(std::ostream& out) : out_(out) {}
  void write(std::int64_t episode, const env::SlotOutcome& outcome, const RunningTotals& totals,
             std::size_t num_mus);

 private:
  std::ostream& out_;
};

/// JSON array helper mapping non-finite doubles to null.
nlohmann::json finite_or_null(double v);

}  // namespace dtmec::harness
