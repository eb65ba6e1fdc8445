#include "dtmec/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>

namespace dtmec {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<Vec2> grid_bs_positions(std::size_t num_bs, double area_width) {
  std::vector<Vec2> out;
  if (num_bs == 0) return out;
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_bs))));
  const std::size_t rows = (num_bs + cols - 1) / cols;
  const double cw = area_width / static_cast<double>(cols);
  const double rh = area_width / static_cast<double>(rows);
  for (std::size_t i = 0; i < num_bs; ++i) {
    const std::size_t r = i / cols;
    const std::size_t c = i % cols;
    out.push_back({(static_cast<double>(c) + 0.5) * cw, (static_cast<double>(r) + 0.5) * rh});
  }
  return out;
}

namespace {

void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

void NetworkConfig::validate() const {
  require(num_mus >= 1, "num_mus", "must be >= 1");
  require(num_bs >= 1, "num_bs", "must be >= 1");
  require(frame_length >= 1, "frame_length", "must be >= 1");
  require(num_frames >= 1, "num_frames", "must be >= 1");
  require(slot_length > 0.0, "slot_length", "must be positive");
  require(area_width > 0.0, "area_width", "must be positive");
  require(bs_positions.empty() || bs_positions.size() == bss(), "bs_positions",
          "must list exactly num_bs points");
  for (const Vec2& p : bs_positions) {
    require(p.x >= 0.0 && p.x <= area_width && p.y >= 0.0 && p.y <= area_width, "bs_positions",
            "point outside the service area");
  }
  require(bandwidth > 0.0, "bandwidth_hz", "must be positive");
  require(wired_capacity > 0.0, "wired_capacity_bps", "must be positive");
  require(max_power > 0.0, "max_power_w", "must be positive");
  require(ref_gain > 0.0, "ref_gain_db", "must be finite");
  require(path_loss_exponent >= 2.0, "path_loss_exponent", "must be >= 2");
  require(rician_factor >= 0.0, "rician_factor", "must be >= 0");
  require(noise_power > 0.0, "noise_power_dbw", "must be finite");
  require(max_cpu_hz > 0.0, "max_cpu_hz", "must be positive");
  require(request_prob >= 0.0 && request_prob <= 1.0, "request_prob", "must lie in [0, 1]");
  require(data_bits_min > 0.0, "data_bits_min", "must be positive");
  require(data_bits_min <= data_bits_max, "data_bits_max", "must be >= data_bits_min");
  require(cycles_per_bit_min > 0.0, "cycles_per_bit_min", "must be positive");
  require(cycles_per_bit_min <= cycles_per_bit_max, "cycles_per_bit_max",
          "must be >= cycles_per_bit_min");
  require(deadline_min_frac > 0.0, "deadline_min_frac", "must be positive");
  require(deadline_min_frac <= deadline_max_frac, "deadline_max_frac",
          "must be >= deadline_min_frac");
  require(deadline_max_frac <= 1.0, "deadline_max_frac", "must be <= 1");
  require(migration_slots >= 0 && migration_slots < frame_length, "migration_slots",
          "must lie in [0, frame_length)");
  require(mean_speed_min >= 0.0, "mean_speed_min", "must be >= 0");
  require(mean_speed_min <= mean_speed_max, "mean_speed_max", "must be >= mean_speed_min");
  require(std::isfinite(mean_heading), "mean_heading", "must be finite");
  require(speed_memory >= 0.0 && speed_memory <= 1.0, "speed_memory", "must lie in [0, 1]");
  require(heading_memory >= 0.0 && heading_memory <= 1.0, "heading_memory",
          "must lie in [0, 1]");
  require(speed_noise_std >= 0.0, "speed_noise_std", "must be >= 0");
  require(heading_noise_std >= 0.0, "heading_noise_std", "must be >= 0");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
  require(eta >= 0.0, "eta", "must be >= 0");
  require(reward_scale > 0.0, "reward_scale", "must be positive");
}

radio::ChannelParams NetworkConfig::channel_params() const {
  return {ref_gain, path_loss_exponent, rician_factor, noise_power, bandwidth};
}

dtsync::RequestParams NetworkConfig::request_params() const {
  dtsync::RequestParams p;
  p.data_bits_min = data_bits_min;
  p.data_bits_max = data_bits_max;
  p.cycles_per_bit_min = cycles_per_bit_min;
  p.cycles_per_bit_max = cycles_per_bit_max;
  p.deadline_min_frac = deadline_min_frac;
  p.deadline_max_frac = deadline_max_frac;
  p.slot_length = slot_length;
  return p;
}

mobility::MobilityParams NetworkConfig::mobility_params() const {
  mobility::MobilityParams p;
  p.speed_memory = speed_memory;
  p.heading_memory = heading_memory;
  p.mean_speed = 0.5 * (mean_speed_min + mean_speed_max);
  p.mean_heading = mean_heading;
  p.speed_noise_mean = speed_noise_mean;
  p.speed_noise_std = speed_noise_std;
  p.heading_noise_mean = heading_noise_mean;
  p.heading_noise_std = heading_noise_std;
  p.slot_length = slot_length;
  p.area_width = area_width;
  p.boundary = boundary;
  return p;
}

std::vector<Vec2> NetworkConfig::resolved_bs_positions() const {
  if (!bs_positions.empty()) return bs_positions;
  return grid_bs_positions(bss(), area_width);
}

namespace {

struct Field {
  std::function<void(NetworkConfig&, const json&)> read;
  std::function<json(const NetworkConfig&)> write;
};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "expected a finite number");
  return d;
}

std::int64_t as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<std::int64_t>();
}

Field number(double NetworkConfig::*member, const std::string& key) {
  return {[member, key](NetworkConfig& c, const json& v) { c.*member = as_number(v, key); },
          [member](const NetworkConfig& c) { return json(c.*member); }};
}

Field integer(std::int64_t NetworkConfig::*member, const std::string& key) {
  return {[member, key](NetworkConfig& c, const json& v) { c.*member = as_integer(v, key); },
          [member](const NetworkConfig& c) { return json(c.*member); }};
}

Field decibel(double NetworkConfig::*member, const std::string& key) {
  return {[member, key](NetworkConfig& c, const json& v) {
            c.*member = db_to_linear(as_number(v, key));
          },
          [member](const NetworkConfig& c) { return json(linear_to_db(c.*member)); }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    t["num_mus"] = integer(&NetworkConfig::num_mus, "num_mus");
    t["num_bs"] = integer(&NetworkConfig::num_bs, "num_bs");
    t["frame_length"] = integer(&NetworkConfig::frame_length, "frame_length");
    t["num_frames"] = integer(&NetworkConfig::num_frames, "num_frames");
    t["slot_length"] = number(&NetworkConfig::slot_length, "slot_length");
    t["area_width"] = number(&NetworkConfig::area_width, "area_width");
    t["bandwidth_hz"] = number(&NetworkConfig::bandwidth, "bandwidth_hz");
    t["wired_capacity_bps"] = number(&NetworkConfig::wired_capacity, "wired_capacity_bps");
    t["max_power_w"] = number(&NetworkConfig::max_power, "max_power_w");
    t["ref_gain_db"] = decibel(&NetworkConfig::ref_gain, "ref_gain_db");
    t["path_loss_exponent"] = number(&NetworkConfig::path_loss_exponent, "path_loss_exponent");
    t["rician_factor"] = number(&NetworkConfig::rician_factor, "rician_factor");
    t["noise_power_dbw"] = decibel(&NetworkConfig::noise_power, "noise_power_dbw");
    t["max_cpu_hz"] = number(&NetworkConfig::max_cpu_hz, "max_cpu_hz");
    t["request_prob"] = number(&NetworkConfig::request_prob, "request_prob");
    t["data_bits_min"] = number(&NetworkConfig::data_bits_min, "data_bits_min");
    t["data_bits_max"] = number(&NetworkConfig::data_bits_max, "data_bits_max");
    t["cycles_per_bit_min"] = number(&NetworkConfig::cycles_per_bit_min, "cycles_per_bit_min");
    t["cycles_per_bit_max"] = number(&NetworkConfig::cycles_per_bit_max, "cycles_per_bit_max");
    t["deadline_min_frac"] = number(&NetworkConfig::deadline_min_frac, "deadline_min_frac");
    t["deadline_max_frac"] = number(&NetworkConfig::deadline_max_frac, "deadline_max_frac");
    t["migration_slots"] = integer(&NetworkConfig::migration_slots, "migration_slots");
    t["mean_speed_min"] = number(&NetworkConfig::mean_speed_min, "mean_speed_min");
    t["mean_speed_max"] = number(&NetworkConfig::mean_speed_max, "mean_speed_max");
    t["mean_heading"] = number(&NetworkConfig::mean_heading, "mean_heading");
    t["speed_memory"] = number(&NetworkConfig::speed_memory, "speed_memory");
    t["heading_memory"] = number(&NetworkConfig::heading_memory, "heading_memory");
    t["speed_noise_mean"] = number(&NetworkConfig::speed_noise_mean, "speed_noise_mean");
    t["speed_noise_std"] = number(&NetworkConfig::speed_noise_std, "speed_noise_std");
    t["heading_noise_mean"] = number(&NetworkConfig::heading_noise_mean, "heading_noise_mean");
    t["heading_noise_std"] = number(&NetworkConfig::heading_noise_std, "heading_noise_std");
    t["epsilon"] = number(&NetworkConfig::epsilon, "epsilon");
    t["eta"] = number(&NetworkConfig::eta, "eta");
    t["reward_scale"] = number(&NetworkConfig::reward_scale, "reward_scale");
    t["boundary"] = {[](NetworkConfig& c, const json& v) {
                       if (v == "reflect") {
                         c.boundary = mobility::BoundaryMode::kReflect;
                       } else if (v == "wrap") {
                         c.boundary = mobility::BoundaryMode::kWrap;
                       } else {
                         throw ConfigError("boundary", "expected \"reflect\" or \"wrap\"");
                       }
                     },
                     [](const NetworkConfig& c) {
                       return json(c.boundary == mobility::BoundaryMode::kWrap ? "wrap"
                                                                               : "reflect");
                     }};
    t["seed"] = {[](NetworkConfig& c, const json& v) {
                   if (!v.is_number_unsigned()) {
                     throw ConfigError("seed", "expected a non-negative integer");
                   }
                   c.seed = v.get<std::uint64_t>();
                 },
                 [](const NetworkConfig& c) { return json(c.seed); }};
    t["bs_positions"] = {[](NetworkConfig& c, const json& v) {
                           if (!v.is_array()) throw ConfigError("bs_positions", "expected an array");
                           c.bs_positions.clear();
                           for (std::size_t i = 0; i < v.size(); ++i) {
                             const std::string key = "bs_positions[" + std::to_string(i) + "]";
                             const json& p = v[i];
                             if (!p.is_array() || p.size() != 2) {
                               throw ConfigError(key, "expected [x, y]");
                             }
                             c.bs_positions.push_back({as_number(p[0], key), as_number(p[1], key)});
                           }
                         },
                         [](const NetworkConfig& c) {
                           json arr = json::array();
                           for (const Vec2& p : c.bs_positions) arr.push_back({p.x, p.y});
                           return arr;
                         }};
    return t;
  }();
  return table;
}

}  // namespace

NetworkConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  NetworkConfig cfg;
  const auto& table = fields();
  for (const auto& [key, value] : j.items()) {
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->second.read(cfg, value);
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const NetworkConfig& cfg) {
  json j = json::object();
  for (const auto& [key, field] : fields()) j[key] = field.write(cfg);
  return j;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "parse error in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace dtmec
