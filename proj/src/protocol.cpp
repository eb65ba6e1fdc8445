#include "dtmec/protocol.hpp"

#include <string>

#include "dtmec/agent_io.hpp"

namespace dtmec::harness {

using nlohmann::json;

namespace {

std::size_t read_index(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ProtocolError(where + ": negative index");
    return v.get<std::size_t>();
  }
  if (v.is_array()) {
    std::vector<double> scores;
    for (const auto& s : v) {
      if (!s.is_number()) throw ProtocolError(where + ": scores must be numbers");
      scores.push_back(s.get<double>());
    }
    if (scores.empty()) throw ProtocolError(where + ": empty score array");
    return env::argmax_index(scores);
  }
  throw ProtocolError(where + ": expected an index or a score array");
}

double read_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ProtocolError(where + ": missing \"" + key + "\"");
  if (!it->is_number()) throw ProtocolError(where + "." + key + ": expected a number");
  return it->get<double>();
}

std::vector<double> read_numbers(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ProtocolError(where + ": missing \"" + key + "\"");
  if (!it->is_array()) throw ProtocolError(where + "." + key + ": expected an array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw ProtocolError(where + "." + key + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json outcome_block(const env::SlotOutcome& o) {
  json delay = json::array();
  for (double t : o.delay) delay.push_back(finite_or_null(t));
  return {{"slot", o.slot}, {"frame", o.frame}, {"t", delay},      {"X", o.failure},
          {"E", o.energy},  {"Xi", o.cost},     {"Y", o.backlog},  {"deployment", o.trace.deployment}};
}

json error_reply(const std::string& op, const std::string& message) {
  return {{"op", op}, {"status", "err"}, {"error", message}};
}

}  // namespace

std::vector<env::AgentAction> decode_actions(const json& actions, const NetworkConfig& config) {
  if (!actions.is_array()) throw ProtocolError("\"actions\" must be an array");
  if (actions.size() != config.num_agents()) {
    throw ProtocolError("expected " + std::to_string(config.num_agents()) + " actions, got " +
                        std::to_string(actions.size()));
  }
  std::vector<env::AgentAction> out;
  out.reserve(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const json& a = actions[i];
    const std::string where = "actions[" + std::to_string(i) + "]";
    if (!a.is_object()) throw ProtocolError(where + ": expected an object");
    if (i < config.mus()) {
      auto bs = a.find("bs");
      if (bs == a.end()) throw ProtocolError(where + ": missing \"bs\"");
      out.emplace_back(env::MuAction{read_index(*bs, where + ".bs"), read_number(a, "power", where)});
    } else if (i < config.mus() + config.bss()) {
      out.emplace_back(
          env::BsAction{read_numbers(a, "compute", where), read_numbers(a, "wired", where)});
    } else {
      auto deploy = a.find("deploy");
      if (deploy == a.end() || !deploy->is_array()) {
        throw ProtocolError(where + ": \"deploy\" must be an array");
      }
      env::CenterAction c;
      for (std::size_t k = 0; k < deploy->size(); ++k) {
        c.deployment.push_back(read_index((*deploy)[k], where + ".deploy[" + std::to_string(k) + "]"));
      }
      out.emplace_back(std::move(c));
    }
  }
  return out;
}

json encode_action(const env::AgentAction& action) {
  if (const auto* mu = std::get_if<env::MuAction>(&action)) {
    return {{"bs", mu->bs}, {"power", mu->power}};
  }
  if (const auto* bs = std::get_if<env::BsAction>(&action)) {
    return {{"compute", bs->compute}, {"wired", bs->wired}};
  }
  return {{"deploy", std::get<env::CenterAction>(action).deployment}};
}

json describe_spec(const NetworkConfig& config) {
  json agents = json::array();
  const auto spaces = env::agent_spaces(config.mus(), config.bss());
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const auto& s = spaces[i];
    agents.push_back({{"id", i + 1},
                      {"index", i},
                      {"kind", env::to_string(s.kind)},
                      {"obs_dim", s.obs_dim},
                      {"discrete", s.discrete},
                      {"continuous", s.continuous}});
  }
  std::size_t state_dim = 0;
  for (const auto& s : spaces) state_dim += s.obs_dim;
  return {{"num_agents", config.num_agents()},
          {"num_mus", config.num_mus},
          {"num_bs", config.num_bs},
          {"ordering",
           {{"mu", {1, config.num_mus}},
            {"bs", {config.num_mus + 1, config.num_mus + config.num_bs}},
            {"center", config.num_mus + config.num_bs + 1}}},
          {"agents", agents},
          {"state_dim", state_dim},
          {"frame_length", config.frame_length},
          {"num_frames", config.num_frames},
          {"episode_slots", config.episode_slots()},
          {"config", config_to_json(config)}};
}

ProtocolSession::ProtocolSession(NetworkConfig config) : base_config_(std::move(config)) {
  base_config_.validate();
}

void ProtocolSession::set_metrics(SlotCsvWriter* csv, SlotJsonlWriter* jsonl) {
  csv_ = csv;
  jsonl_ = jsonl;
}

std::string ProtocolSession::handle_line(const std::string& line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::parse_error& e) {
    return error_reply("", std::string("malformed JSON: ") + e.what()).dump();
  }
  return handle(request).dump();
}

json ProtocolSession::handle(const json& request) {
  if (!request.is_object()) return error_reply("", "request must be a JSON object");
  auto op_it = request.find("op");
  if (op_it == request.end() || !op_it->is_string()) {
    return error_reply("", "request needs a string \"op\"");
  }
  const std::string op = op_it->get<std::string>();
  if (closed_) return error_reply(op, "session is closed");
  try {
    json reply;
    if (op == "spec") {
      reply = describe_spec(env_ ? env_->config() : base_config_);
    } else if (op == "reset") {
      reply = on_reset(request);
    } else if (op == "step") {
      reply = on_step(request);
    } else if (op == "close") {
      closed_ = true;
      reply = json::object();
    } else {
      return error_reply(op, "unknown op \"" + op + "\"");
    }
    reply["op"] = op;
    reply["status"] = "ok";
    return reply;
  } catch (const std::exception& e) {
    return error_reply(op, e.what());
  }
}

json ProtocolSession::observation_block() const {
  const env::ObservationScale scale = env_->observation_scale();
  json obs = json::array();
  for (const auto& o : env_->observations()) obs.push_back(env::flatten(o, scale));
  return obs;
}

json ProtocolSession::on_reset(const json& request) {
  NetworkConfig config = base_config_;
  if (auto it = request.find("config"); it != request.end()) {
    if (!it->is_object()) throw ProtocolError("\"config\" must be an object");
    json merged = config_to_json(base_config_);
    merged.update(*it);
    config = config_from_json(merged);
  }
  std::uint64_t seed = config.seed;
  if (auto it = request.find("seed"); it != request.end()) {
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                     it->get<std::int64_t>() < 0)) {
      throw ProtocolError("\"seed\" must be a non-negative integer");
    }
    seed = it->get<std::uint64_t>();
  }
  // Construct and reset on the side so a failure leaves the old episode intact.
  env::Environment fresh(config);
  fresh.reset(seed);
  env_.emplace(std::move(fresh));
  ++episode_;
  totals_ = RunningTotals{};
  return {{"seed", seed},
          {"episode", episode_},
          {"slot", 0},
          {"frame", 0},
          {"observations", observation_block()},
          {"state", env_->global_state()},
          {"done", false}};
}

json ProtocolSession::on_step(const json& request) {
  if (!env_) throw ProtocolError("step before reset");
  if (env_->done()) throw ProtocolError("episode finished; send reset");
  auto it = request.find("actions");
  if (it == request.end()) throw ProtocolError("missing \"actions\"");
  const auto actions = decode_actions(*it, env_->config());
  env::StepResult r = env_->step(actions);
  const env::SlotOutcome& o = r.outcome;
  totals_.add(o);
  if (csv_) csv_->write(episode_, o);
  if (jsonl_) jsonl_->write(episode_, o, totals_, env_->config().mus());

  const NetworkConfig& c = env_->config();
  json rewards = json::array();
  for (std::size_t i = 0; i < c.num_agents(); ++i) {
    rewards.push_back(i == env::center_agent(c) ? o.reward_center : o.reward_global);
  }
  const env::ObservationScale scale = env_->observation_scale();
  json obs = json::array();
  for (const auto& ob : r.observations) obs.push_back(env::flatten(ob, scale));
  return {{"observations", obs},
          {"state", env_->global_state()},
          {"rewards", rewards},
          {"reward_global", o.reward_global},
          {"reward_center", o.reward_center},
          {"done", o.done},
          {"outcome", outcome_block(o)}};
}

}  // namespace dtmec::harness
