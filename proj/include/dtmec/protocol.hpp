#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtmec/config.hpp"
#include "dtmec/env.hpp"
#include "dtmec/metrics.hpp"

namespace dtmec::harness {

/// Thrown for malformed or out-of-place protocol messages.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decodes one JSON action per agent, in agent order. MU: {"bs": index or
/// score array, "power": raw}. BS: {"compute": [K raw], "wired": [K raw]}.
/// Centre: {"deploy": [K indices or score arrays]}.
std::vector<env::AgentAction> decode_actions(const nlohmann::json& actions,
                                             const NetworkConfig& config);
nlohmann::json encode_action(const env::AgentAction& action);

/// Static description of the agent set: ordering, observation and action sizes.
nlohmann::json describe_spec(const NetworkConfig& config);

/// One learner connection. Owns its environment exclusively. Requests are
/// newline-free JSON objects with an "op" of reset, step, spec or close; every
/// reply carries the same "op" and "status": "ok" or "err". A failed request
/// leaves the session exactly as it was.
class ProtocolSession {
 public:
  explicit ProtocolSession(NetworkConfig config);

  std::string handle_line(const std::string& line);
  nlohmann::json handle(const nlohmann::json& request);

  bool closed() const { return closed_; }

  /// Per-session metrics sinks; either may be null.
  void set_metrics(SlotCsvWriter* csv, SlotJsonlWriter* jsonl);

 private:
  nlohmann::json on_reset(const nlohmann::json& request);
  nlohmann::json on_step(const nlohmann::json& request);
  nlohmann::json observation_block() const;

  NetworkConfig base_config_;
  std::optional<env::Environment> env_;
  std::int64_t episode_ = -1;
  RunningTotals totals_;
  SlotCsvWriter* csv_ = nullptr;
  SlotJsonlWriter* jsonl_ = nullptr;
  bool closed_ = false;
};

}  // namespace dtmec::harness
