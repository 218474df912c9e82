#pragma once

#include "clustercast/random.hpp"
#include "clustercast/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace clustercast {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  double norm() const noexcept { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

struct Position3 {
  Vec2 planar{};
  double height = 0.0;

  bool operator==(const Position3&) const = default;
};

inline double planar_distance(const Position3& a, const Position3& b) noexcept {
  return (a.planar - b.planar).norm();
}

inline double distance(const Position3& a, const Position3& b) noexcept {
  const double dh = a.height - b.height;
  return std::sqrt(planar_distance(a, b) * planar_distance(a, b) + dh * dh);
}

struct Cluster {
  Position3 center{};
  std::vector<Position3> members;
  double radius_r = 0.0;

  bool operator==(const Cluster&) const = default;
};

/// One Monte Carlo drop: cluster centers scattered over the region disk,
/// UAVs uniform in a disk of radius r around each center, BS at the origin.
struct Topology {
  std::vector<Cluster> clusters;
  Position3 bs_position{};
  Vec2 region_center{};
  double region_radius = 0.0;
  double parent_density_lambda = 0.0;
  TopologyMode mode = TopologyMode::FixedTotal;

  std::size_t uav_count() const noexcept;
  bool operator==(const Topology&) const = default;
};

/// Uniform point in a disk of radius `radius` centered at the origin
/// (radial CDF proportional to a^2).
Vec2 sample_uniform_disk(double radius, Rng& rng);

/// Homogeneous PPP of intensity `lambda` restricted to the disk of radius
/// `region_radius` centered at `region_center`.
std::vector<Vec2> sample_parent_centers(double region_radius, double lambda, Rng& rng,
                                        Vec2 region_center = {});

std::vector<Position3> sample_cluster_members(const Position3& center, double radius_r, int count,
                                              Rng& rng);

/// Even split of `total` into `parts`, remainder to the first parts.
std::vector<int> split_evenly(int total, int parts);

Topology build_topology(const ScenarioConfig& cfg, Rng& rng);

/// Writes `drop_id,cluster_id,uav_id,x,y,h` rows (no header). uav_id is global
/// within the drop, in cluster-major order.
void write_topology_csv_rows(std::ostream& out, const Topology& topo, int drop_id);
inline constexpr const char* kTopologyCsvHeader = "drop_id,cluster_id,uav_id,x,y,h";

} // namespace clustercast
