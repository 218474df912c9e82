#pragma once

// Flat key=value configuration text:
//
//   # comment
//   geometry.d0_m = 800
//   radio.p_bs_mw = 1000
//   run.schemes = clustering,benchmark,rnc
//
// Keys carry a section prefix (geometry, radio, protocol, run). Unknown keys
// and malformed values raise ConfigError naming the key.

#include "clustercast/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace clustercast {

/// Every accepted key, in serialization order.
const std::vector<std::string>& config_keys();

/// Sets one field from its text form.
void apply_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Text form of one field; round-trips through apply_config_value.
std::string config_value(const ScenarioConfig& cfg, std::string_view key);

/// Applies every assignment in `text` on top of `base`. Later lines win.
ScenarioConfig parse_config_text(std::string_view text, ScenarioConfig base = {});

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});

/// All keys, one `key = value` line each. Doubles use %.17g, so
/// parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

} // namespace clustercast
