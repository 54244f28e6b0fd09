#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "rps/dcf.hpp"
#include "rps/polling.hpp"

namespace rps::io {

/// JSON <-> DcfParams. Keys are the field names; missing keys fall back to
/// the defaults, unknown keys are rejected.
nlohmann::json to_json(const dcf::DcfParams& params);
dcf::DcfParams dcf_params_from_json(const nlohmann::json& j);
dcf::DcfParams load_dcf_params(const std::filesystem::path& path);
void save_dcf_params(const std::filesystem::path& path,
                     const dcf::DcfParams& params);

/// JSON <-> PollingConfig (rates in pkts/s, times in seconds). All vector
/// fields are required; "n", when present, must match their length.
nlohmann::json to_json(const polling::PollingConfig& cfg);
polling::PollingConfig polling_config_from_json(const nlohmann::json& j);
polling::PollingConfig load_polling_config(const std::filesystem::path& path);
void save_polling_config(const std::filesystem::path& path,
                         const polling::PollingConfig& cfg);

nlohmann::json load_json_file(const std::filesystem::path& path);

/// FNV-1a over the canonical (key-sorted) serialization, as a hex string.
std::string config_hash(const nlohmann::json& j);

}  // namespace rps::io
