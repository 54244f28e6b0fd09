#include "rps/io/config.hpp"

#include <fstream>
#include <set>

#include "rps/errors.hpp"

namespace rps::io {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const char* what) {
  if (!j.is_object())
    throw ConfigError(std::string(what) + ": expected a JSON object");
  for (const auto& item : j.items())
    if (!known.contains(item.key()))
      throw ConfigError(std::string(what) + ": unknown key '" + item.key() +
                        "'");
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Eigen::ArrayXd read_vector(const json& j, const char* key) {
  if (!j.contains(key))
    throw ConfigError(std::string("missing required field '") + key + "'");
  std::vector<double> v;
  try {
    v = j.at(key).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), v.size());
}

json vector_to_json(const Eigen::ArrayXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

json to_json(const dcf::DcfParams& p) {
  return json{{"cw_min_W", p.cw_min_W},
              {"max_stage_m", p.max_stage_m},
              {"slot_time", p.slot_time},
              {"sifs", p.sifs},
              {"difs", p.difs},
              {"phy_header_time", p.phy_header_time},
              {"mac_header_bits", p.mac_header_bits},
              {"payload_bits", p.payload_bits},
              {"ack_bits", p.ack_bits},
              {"data_rate", p.data_rate},
              {"propagation_delay", p.propagation_delay}};
}

dcf::DcfParams dcf_params_from_json(const json& j) {
  static const std::set<std::string> known = {
      "cw_min_W",        "max_stage_m",     "slot_time",
      "sifs",            "difs",            "phy_header_time",
      "mac_header_bits", "payload_bits",    "ack_bits",
      "data_rate",       "propagation_delay"};
  reject_unknown_keys(j, known, "DcfParams");
  dcf::DcfParams p;
  read_field(j, "cw_min_W", p.cw_min_W);
  read_field(j, "max_stage_m", p.max_stage_m);
  read_field(j, "slot_time", p.slot_time);
  read_field(j, "sifs", p.sifs);
  read_field(j, "difs", p.difs);
  read_field(j, "phy_header_time", p.phy_header_time);
  read_field(j, "mac_header_bits", p.mac_header_bits);
  read_field(j, "payload_bits", p.payload_bits);
  read_field(j, "ack_bits", p.ack_bits);
  read_field(j, "data_rate", p.data_rate);
  read_field(j, "propagation_delay", p.propagation_delay);
  p.validate();
  return p;
}

json to_json(const polling::PollingConfig& cfg) {
  return json{{"n", cfg.n()},
              {"lambda", vector_to_json(cfg.lambda)},
              {"gamma", vector_to_json(cfg.gamma)},
              {"service_mean", vector_to_json(cfg.service_mean)},
              {"service_m2", vector_to_json(cfg.service_m2)},
              {"switch_mean", vector_to_json(cfg.switch_mean)},
              {"switch_m2", vector_to_json(cfg.switch_m2)}};
}

polling::PollingConfig polling_config_from_json(const json& j) {
  static const std::set<std::string> known = {
      "n",           "lambda",      "gamma",     "service_mean",
      "service_m2", "switch_mean", "switch_m2"};
  reject_unknown_keys(j, known, "PollingConfig");
  polling::PollingConfig cfg;
  cfg.lambda = read_vector(j, "lambda");
  cfg.gamma = read_vector(j, "gamma");
  cfg.service_mean = read_vector(j, "service_mean");
  cfg.service_m2 = read_vector(j, "service_m2");
  cfg.switch_mean = read_vector(j, "switch_mean");
  cfg.switch_m2 = read_vector(j, "switch_m2");
  if (j.contains("n")) {
    int n = 0;
    read_field(j, "n", n);
    if (n != cfg.n())
      throw ConfigError("field 'n' does not match vector lengths");
  }
  cfg.validate();
  return cfg;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

dcf::DcfParams load_dcf_params(const std::filesystem::path& path) {
  return dcf_params_from_json(load_json_file(path));
}

void save_dcf_params(const std::filesystem::path& path,
                     const dcf::DcfParams& params) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << to_json(params).dump(2) << '\n';
}

polling::PollingConfig load_polling_config(const std::filesystem::path& path) {
  return polling_config_from_json(load_json_file(path));
}

void save_polling_config(const std::filesystem::path& path,
                         const polling::PollingConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << to_json(cfg).dump(2) << '\n';
}

std::string config_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace rps::io
