#pragma once

#include "clustercast/channel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clustercast {

enum class Scheme { Clustering, Benchmark, Rnc };

/// How cluster sizes are chosen when a topology is dropped.
enum class TopologyMode {
  FixedTotal, // exactly num_clusters centers, total_uavs split evenly
  Density,    // PPP centers at `lambda`, floor(lambda_off * pi * r^2) UAVs each
};

/// How the cluster radius follows the cluster count.
enum class RadiusRule {
  Fixed,             // use radius_r as given
  DensityPreserving, // r(C) such that lambda_off * pi * r^2 = total_uavs / C
};

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(TopologyMode m) noexcept;
std::string_view to_string(RadiusRule r) noexcept;
std::optional<Scheme> parse_scheme(std::string_view text) noexcept;
std::optional<TopologyMode> parse_topology_mode(std::string_view text) noexcept;
std::optional<RadiusRule> parse_radius_rule(std::string_view text) noexcept;

/// Full description of one experiment. Distances in meters, times in ms.
/// The BS sits at the planar origin; the UAV network (the region disk) is
/// centered at (d0, 0).
struct ScenarioConfig {
  // geometry
  double region_radius_m = 100.0;
  double d0_m = 800.0;
  int num_clusters = 5;
  int total_uavs = 50;
  double lambda_per_m2 = 1e-4;
  double lambda_off_per_m2 = 1e-3;
  double radius_r_m = 50.0;
  RadiusRule radius_rule = RadiusRule::Fixed;
  TopologyMode mode = TopologyMode::FixedTotal;
  double h1_m = 10.0;
  double h2_m = 20.0;
  /// BS-to-cluster-center distance used by the closed-form metrics.
  double v_norm_m = 800.0;

  RadioParams radio{};

  // protocol timing
  double packet_len_ms = 10.0;
  double t_req_ms = 1.0;
  double t_ack_ms = 1.0;
  double slot_us = 9.0;
  int cw_min = 16;
  int cw_max = 64;
  double max_time_ms = 1000.0;
  int generation_size = 8;
  bool opportunistic_overhearing = true;

  std::vector<Scheme> schemes{Scheme::Clustering, Scheme::Benchmark, Scheme::Rnc};
  int replications = 1000;
  std::uint64_t base_seed = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Cluster radius in effect for `num_clusters` clusters under the config's radius rule.
double effective_radius(const ScenarioConfig& cfg, int num_clusters);
inline double effective_radius(const ScenarioConfig& cfg) {
  return effective_radius(cfg, cfg.num_clusters);
}

/// floor(lambda_off * pi * r^2), the number of UAVs a cluster disk holds in
/// density mode. A 1e-9 relative guard absorbs rounding when r was derived
/// from an integer target (r(C) makes the product exactly total/C).
int peer_count(double lambda_off_per_m2, double radius_r_m);

/// Enforces every ScenarioConfig invariant. Throws ParameterError naming the field.
void validate(const ScenarioConfig& cfg);

} // namespace clustercast
