#include "clustercast/geometry.hpp"

#include "clustercast/errors.hpp"

#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

namespace clustercast {

std::size_t Topology::uav_count() const noexcept {
  std::size_t n = 0;
  for (const Cluster& c : clusters) n += c.members.size();
  return n;
}

Vec2 sample_uniform_disk(double radius, Rng& rng) {
  const double a = radius * std::sqrt(uniform01(rng));
  const double theta = 2.0 * std::numbers::pi * uniform01(rng);
  return {a * std::cos(theta), a * std::sin(theta)};
}

std::vector<Vec2> sample_parent_centers(double region_radius, double lambda, Rng& rng,
                                        Vec2 region_center) {
  if (!(region_radius > 0.0)) throw ParameterError("region_radius", "must be positive");
  if (!(lambda > 0.0)) throw ParameterError("lambda", "must be positive");
  const double mean = lambda * std::numbers::pi * region_radius * region_radius;
  const auto n = std::poisson_distribution<long>(mean)(rng);
  std::vector<Vec2> centers;
  centers.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) centers.push_back(region_center + sample_uniform_disk(region_radius, rng));
  return centers;
}

std::vector<Position3> sample_cluster_members(const Position3& center, double radius_r, int count,
                                              Rng& rng) {
  if (!(radius_r > 0.0)) throw ParameterError("radius_r", "must be positive");
  if (count < 1) throw ParameterError("count", "must be >= 1");
  std::vector<Position3> members;
  members.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    members.push_back({center.planar + sample_uniform_disk(radius_r, rng), center.height});
  }
  return members;
}

std::vector<int> split_evenly(int total, int parts) {
  if (parts < 1) throw ParameterError("num_clusters", "must be >= 1");
  std::vector<int> sizes(static_cast<std::size_t>(parts), total / parts);
  for (int i = 0; i < total % parts; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

Topology build_topology(const ScenarioConfig& cfg, Rng& rng) {
  const double r = effective_radius(cfg);
  if (!(r > 0.0)) throw ParameterError("geometry.radius_r_m", "must be positive");
  if (!(cfg.d0_m > cfg.region_radius_m + r)) {
    throw ParameterError("geometry.d0_m", "BS must lie outside every cluster disk (d0 > region_radius + r)");
  }

  Topology topo;
  topo.bs_position = {{0.0, 0.0}, cfg.h1_m};
  topo.region_center = {cfg.d0_m, 0.0};
  topo.region_radius = cfg.region_radius_m;
  topo.parent_density_lambda = cfg.lambda_per_m2;
  topo.mode = cfg.mode;

  std::vector<Vec2> centers;
  std::vector<int> sizes;
  if (cfg.mode == TopologyMode::FixedTotal) {
    if (cfg.total_uavs < cfg.num_clusters) {
      throw ParameterError("geometry.total_uavs", "must be >= num_clusters in fixed_total mode");
    }
    // PPP conditioned on exactly C points is a binomial point process.
    for (int c = 0; c < cfg.num_clusters; ++c) {
      centers.push_back(topo.region_center + sample_uniform_disk(cfg.region_radius_m, rng));
    }
    sizes = split_evenly(cfg.total_uavs, cfg.num_clusters);
  } else {
    const int per_cluster = peer_count(cfg.lambda_off_per_m2, r);
    if (per_cluster < 1) throw ParameterError("geometry.lambda_off_per_m2", "floor(lambda_off * pi * r^2) is 0");
    centers = sample_parent_centers(cfg.region_radius_m, cfg.lambda_per_m2, rng, topo.region_center);
    sizes.assign(centers.size(), per_cluster);
  }

  topo.clusters.reserve(centers.size());
  for (std::size_t c = 0; c < centers.size(); ++c) {
    Cluster cluster;
    cluster.center = {centers[c], cfg.h2_m};
    cluster.radius_r = r;
    cluster.members = sample_cluster_members(cluster.center, r, sizes[c], rng);
    topo.clusters.push_back(std::move(cluster));
  }
  return topo;
}

void write_topology_csv_rows(std::ostream& out, const Topology& topo, int drop_id) {
  int uav = 0;
  char buf[160];
  for (std::size_t c = 0; c < topo.clusters.size(); ++c) {
    for (const Position3& p : topo.clusters[c].members) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%d,%.17g,%.17g,%.17g\n", drop_id, c, uav++, p.planar.x,
                    p.planar.y, p.height);
      out << buf;
    }
  }
}

} // namespace clustercast
