#include "clustercast/config.hpp"

#include "clustercast/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace clustercast {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <class Access>
Field double_field(std::string key, Access access) {
  return {key,
          [access, key](ScenarioConfig& c, std::string_view v) { access(c) = parse_number<double>(key, v); },
          [access](const ScenarioConfig& c) { return format_double(access(const_cast<ScenarioConfig&>(c))); }};
}

template <class Access>
Field int_field(std::string key, Access access) {
  return {key, [access, key](ScenarioConfig& c, std::string_view v) { access(c) = parse_number<int>(key, v); },
          [access](const ScenarioConfig& c) { return std::to_string(access(const_cast<ScenarioConfig&>(c))); }};
}

#define CC_FIELD(kind, key, expr) kind##_field(key, [](ScenarioConfig& c) -> auto& { return expr; })

std::vector<Field> build_fields() {
  std::vector<Field> f{
      CC_FIELD(double, "geometry.region_radius_m", c.region_radius_m),
      CC_FIELD(double, "geometry.d0_m", c.d0_m),
      CC_FIELD(int, "geometry.num_clusters", c.num_clusters),
      CC_FIELD(int, "geometry.total_uavs", c.total_uavs),
      CC_FIELD(double, "geometry.lambda_per_m2", c.lambda_per_m2),
      CC_FIELD(double, "geometry.lambda_off_per_m2", c.lambda_off_per_m2),
      CC_FIELD(double, "geometry.radius_r_m", c.radius_r_m),
  };
  f.push_back({"geometry.radius_rule",
               [](ScenarioConfig& c, std::string_view v) {
                 const auto r = parse_radius_rule(v);
                 if (!r) throw ConfigError("geometry.radius_rule", "expected fixed or density_preserving");
                 c.radius_rule = *r;
               },
               [](const ScenarioConfig& c) { return std::string(to_string(c.radius_rule)); }});
  f.push_back({"geometry.mode",
               [](ScenarioConfig& c, std::string_view v) {
                 const auto m = parse_topology_mode(v);
                 if (!m) throw ConfigError("geometry.mode", "expected fixed_total or density");
                 c.mode = *m;
               },
               [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); }});
  f.push_back(CC_FIELD(double, "geometry.h1_m", c.h1_m));
  f.push_back(CC_FIELD(double, "geometry.h2_m", c.h2_m));
  f.push_back(CC_FIELD(double, "geometry.v_norm_m", c.v_norm_m));

  f.push_back(CC_FIELD(double, "radio.p_bs_mw", c.radio.p_bs_mw));
  f.push_back(CC_FIELD(double, "radio.p_uav_mw", c.radio.p_uav_mw));
  f.push_back(CC_FIELD(double, "radio.bandwidth_hz", c.radio.bandwidth_hz));
  f.push_back(CC_FIELD(double, "radio.noise_density_mw_per_hz", c.radio.noise_density_mw_per_hz));
  f.push_back(CC_FIELD(double, "radio.snr_threshold", c.radio.snr_threshold));
  f.push_back(CC_FIELD(double, "radio.bs_to_uav.pl0_db", c.radio.bs_to_uav.pl0_db));
  f.push_back(CC_FIELD(double, "radio.bs_to_uav.dist_coeff_a", c.radio.bs_to_uav.dist_coeff_a));
  f.push_back(CC_FIELD(double, "radio.bs_to_uav.freq_coeff_b", c.radio.bs_to_uav.freq_coeff_b));
  f.push_back(CC_FIELD(double, "radio.bs_to_uav.carrier_freq_ghz", c.radio.bs_to_uav.carrier_freq_ghz));
  f.push_back(CC_FIELD(double, "radio.uav_to_uav.pl0_db", c.radio.uav_to_uav.pl0_db));
  f.push_back(CC_FIELD(double, "radio.uav_to_uav.dist_coeff_a", c.radio.uav_to_uav.dist_coeff_a));
  f.push_back(CC_FIELD(double, "radio.uav_to_uav.freq_coeff_b", c.radio.uav_to_uav.freq_coeff_b));
  f.push_back(CC_FIELD(double, "radio.uav_to_uav.carrier_freq_ghz", c.radio.uav_to_uav.carrier_freq_ghz));

  f.push_back(CC_FIELD(double, "protocol.packet_len_ms", c.packet_len_ms));
  f.push_back(CC_FIELD(double, "protocol.t_req_ms", c.t_req_ms));
  f.push_back(CC_FIELD(double, "protocol.t_ack_ms", c.t_ack_ms));
  f.push_back(CC_FIELD(double, "protocol.slot_us", c.slot_us));
  f.push_back(CC_FIELD(int, "protocol.cw_min", c.cw_min));
  f.push_back(CC_FIELD(int, "protocol.cw_max", c.cw_max));
  f.push_back(CC_FIELD(double, "protocol.max_time_ms", c.max_time_ms));
  f.push_back(CC_FIELD(int, "protocol.generation_size", c.generation_size));
  f.push_back({"protocol.opportunistic_overhearing",
               [](ScenarioConfig& c, std::string_view v) {
                 c.opportunistic_overhearing = parse_bool("protocol.opportunistic_overhearing", v);
               },
               [](const ScenarioConfig& c) { return std::string(c.opportunistic_overhearing ? "true" : "false"); }});

  f.push_back({"run.schemes",
               [](ScenarioConfig& c, std::string_view v) {
                 std::vector<Scheme> schemes;
                 while (!v.empty()) {
                   const auto comma = v.find(',');
                   const std::string_view item = trim(v.substr(0, comma));
                   const auto s = parse_scheme(item);
                   if (!s) throw ConfigError("run.schemes", "unknown scheme '" + std::string(item) + "'");
                   schemes.push_back(*s);
                   v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
                 }
                 if (schemes.empty()) throw ConfigError("run.schemes", "must name at least one scheme");
                 c.schemes = std::move(schemes);
               },
               [](const ScenarioConfig& c) {
                 std::string out;
                 for (Scheme s : c.schemes) {
                   if (!out.empty()) out += ',';
                   out += to_string(s);
                 }
                 return out;
               }});
  f.push_back(CC_FIELD(int, "run.replications", c.replications));
  f.push_back({"run.base_seed",
               [](ScenarioConfig& c, std::string_view v) { c.base_seed = parse_number<std::uint64_t>("run.base_seed", v); },
               [](const ScenarioConfig& c) { return std::to_string(c.base_seed); }});
  return f;
}

#undef CC_FIELD

const std::vector<Field>& fields() {
  static const std::vector<Field> table = build_fields();
  return table;
}

const Field& field_for(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError(std::string(key), "unknown key");
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  field_for(key).set(cfg, trim(value));
}

std::string config_value(const ScenarioConfig& cfg, std::string_view key) {
  return field_for(key).get(cfg);
}

ScenarioConfig parse_config_text(std::string_view text, ScenarioConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    apply_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

} // namespace clustercast
