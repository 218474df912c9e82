#include "clustercast/scenario.hpp"

#include "clustercast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace clustercast {

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
  case Scheme::Clustering: return "clustering";
  case Scheme::Benchmark: return "benchmark";
  case Scheme::Rnc: return "rnc";
  }
  return "?";
}

std::string_view to_string(TopologyMode m) noexcept {
  return m == TopologyMode::FixedTotal ? "fixed_total" : "density";
}

std::string_view to_string(RadiusRule r) noexcept {
  return r == RadiusRule::Fixed ? "fixed" : "density_preserving";
}

std::optional<Scheme> parse_scheme(std::string_view text) noexcept {
  for (Scheme s : {Scheme::Clustering, Scheme::Benchmark, Scheme::Rnc}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<TopologyMode> parse_topology_mode(std::string_view text) noexcept {
  for (TopologyMode m : {TopologyMode::FixedTotal, TopologyMode::Density}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::optional<RadiusRule> parse_radius_rule(std::string_view text) noexcept {
  for (RadiusRule r : {RadiusRule::Fixed, RadiusRule::DensityPreserving}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

double effective_radius(const ScenarioConfig& cfg, int num_clusters) {
  if (cfg.radius_rule == RadiusRule::Fixed) return cfg.radius_r_m;
  if (num_clusters < 1) throw ParameterError("num_clusters", "must be >= 1");
  if (!(cfg.lambda_off_per_m2 > 0.0)) throw ParameterError("lambda_off_per_m2", "must be positive");
  return std::sqrt(static_cast<double>(cfg.total_uavs) /
                   (static_cast<double>(num_clusters) * std::numbers::pi * cfg.lambda_off_per_m2));
}

int peer_count(double lambda_off_per_m2, double radius_r_m) {
  const double x = lambda_off_per_m2 * std::numbers::pi * radius_r_m * radius_r_m;
  return static_cast<int>(std::floor(x * (1.0 + 1e-9)));
}

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ParameterError(field, message);
}

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

} // namespace

void validate(const ScenarioConfig& cfg) {
  require(positive(cfg.region_radius_m), "geometry.region_radius_m", "must be positive");
  require(positive(cfg.d0_m), "geometry.d0_m", "must be positive");
  require(cfg.num_clusters >= 1, "geometry.num_clusters", "must be >= 1");
  require(cfg.total_uavs >= 1, "geometry.total_uavs", "must be >= 1");
  require(positive(cfg.lambda_per_m2), "geometry.lambda_per_m2", "must be positive");
  require(positive(cfg.lambda_off_per_m2), "geometry.lambda_off_per_m2", "must be positive");
  require(positive(cfg.radius_r_m), "geometry.radius_r_m", "must be positive");
  require(cfg.h1_m >= 0.0 && std::isfinite(cfg.h1_m), "geometry.h1_m", "must be >= 0");
  require(cfg.h2_m >= 0.0 && std::isfinite(cfg.h2_m), "geometry.h2_m", "must be >= 0");
  require(positive(cfg.v_norm_m), "geometry.v_norm_m", "must be positive");
  validate(cfg.radio);
  require(positive(cfg.packet_len_ms), "protocol.packet_len_ms", "must be positive");
  require(cfg.t_req_ms >= 0.0 && std::isfinite(cfg.t_req_ms), "protocol.t_req_ms", "must be >= 0");
  require(cfg.t_ack_ms >= 0.0 && std::isfinite(cfg.t_ack_ms), "protocol.t_ack_ms", "must be >= 0");
  require(positive(cfg.slot_us), "protocol.slot_us", "must be positive");
  require(cfg.cw_min >= 1, "protocol.cw_min", "must be >= 1");
  require(cfg.cw_max >= cfg.cw_min, "protocol.cw_max", "must be >= cw_min");
  require(positive(cfg.max_time_ms), "protocol.max_time_ms", "must be positive");
  require(cfg.generation_size >= 1, "protocol.generation_size", "must be >= 1");
  require(!cfg.schemes.empty(), "run.schemes", "must name at least one scheme");
  require(cfg.replications >= 1, "run.replications", "must be >= 1");

  const double r = effective_radius(cfg);
  require(positive(r), "geometry.radius_r_m", "effective radius must be positive");
  // Far-deployment regime: the distance laws need the BS outside every cluster disk.
  if (!(cfg.v_norm_m > r)) {
    throw ParameterError("geometry.v_norm_m", "far-deployment constraint violated: v_norm must exceed radius_r");
  }
  if (!(cfg.d0_m > cfg.region_radius_m + r)) {
    throw ParameterError("geometry.d0_m",
                         "far-deployment constraint violated: d0 must exceed region_radius + radius_r");
  }
  if (cfg.mode == TopologyMode::Density && peer_count(cfg.lambda_off_per_m2, r) < 1) {
    throw ParameterError("geometry.lambda_off_per_m2", "floor(lambda_off * pi * r^2) must be >= 1");
  }
}

} // namespace clustercast
