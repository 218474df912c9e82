#pragma once

#include "clustercast/random.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

namespace clustercast {

/// Which distance a distribution describes.
///  D1Hat: planar BS-to-UAV distance given the BS-to-center distance.
///  D1:    3-D BS-to-UAV distance (adds the height gap h1 - h2).
///  D2:    distance from a UAV at offset a from its center to a uniform peer.
///  A:     offset of a uniform UAV from its cluster center.
enum class DistanceKind { D1Hat, D1, D2, A };

std::string_view to_string(DistanceKind k) noexcept;
std::optional<DistanceKind> parse_distance_kind(std::string_view text) noexcept;

/// Cluster seen from the BS. v_norm is the planar BS-to-center distance.
struct ClusterGeometry {
  double v_norm = 800.0;
  double radius_r = 50.0;
  double h1 = 10.0;
  double h2 = 20.0;

  double height_gap() const noexcept { return h1 - h2; }
};

/// Requires radius_r > 0 and v_norm > radius_r (BS outside the cluster disk).
void validate(const ClusterGeometry& geom);

struct Support {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

Support d1_hat_support(const ClusterGeometry& geom) noexcept;
Support d1_support(const ClusterGeometry& geom) noexcept;
Support d2_support(double a, double radius_r) noexcept;

/// Density of the planar BS-to-UAV distance:
///   (2 d / (pi r^2)) * (pi/2 - asin((d^2 + v^2 - r^2) / (2 v d)))  on [v - r, v + r].
double pdf_d1_hat(double d1_hat, const ClusterGeometry& geom);

/// Density of the 3-D BS-to-UAV distance, via d_hat = sqrt(d1^2 - (h1 - h2)^2).
double pdf_d1(double d1, const ClusterGeometry& geom);

/// Density of the UAV-to-peer distance given the UAV sits at offset a <= r.
/// Below r - a the circle of radius d2 lies entirely inside the disk and the
/// density is 2 d2 / r^2; between r - a and r + a the arcsin form applies.
double pdf_d2(double d2, double a, double radius_r);

/// 2 a / r^2 on [0, r].
double pdf_a(double a, double radius_r);

/// A distance law with its support, a tabulated CDF and an inverse-CDF sampler.
/// Immutable after construction, so concurrent reads are safe.
class ConditionalDistanceDistribution {
public:
  static constexpr std::size_t kDefaultGridPoints = 4096;

  ConditionalDistanceDistribution(DistanceKind kind, std::function<double(double)> pdf, Support support,
                                  std::vector<double> breakpoints = {},
                                  std::size_t grid_points = kDefaultGridPoints);

  DistanceKind kind() const noexcept { return kind_; }
  double support_lo() const noexcept { return support_.lo; }
  double support_hi() const noexcept { return support_.hi; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  double pdf(double x) const { return pdf_(x); }
  /// Integral of the pdf over the support by adaptive quadrature.
  double total_mass() const noexcept { return total_mass_; }

  double cdf(double x) const noexcept;
  double quantile(double u) const noexcept;
  double sample(Rng& rng) const;

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> cdf_table() const noexcept { return cdf_; }

  /// Kolmogorov-Smirnov statistic of n inverse-CDF samples against the table.
  double ks_self_check(std::size_t n, Rng& rng) const;

private:
  DistanceKind kind_;
  std::function<double(double)> pdf_;
  Support support_;
  std::vector<double> breakpoints_;
  double total_mass_ = 1.0;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

ConditionalDistanceDistribution make_d1_hat_distribution(const ClusterGeometry& geom);
ConditionalDistanceDistribution make_d1_distribution(const ClusterGeometry& geom);
ConditionalDistanceDistribution make_d2_distribution(double a, double radius_r);
ConditionalDistanceDistribution make_a_distribution(double radius_r);

/// Everything needed to build one of the four laws, and to sample the same
/// distance directly from the geometric construction.
struct DistanceQuery {
  DistanceKind kind = DistanceKind::D1;
  ClusterGeometry geom{};
  double a = 25.0; // only used by D2

  ConditionalDistanceDistribution distribution() const;
};

/// Sup-norm gap between the empirical CDF of n geometrically drawn distances
/// and the quadrature CDF of the matching law.
double empirical_cdf_gap(std::vector<double> samples, const ConditionalDistanceDistribution& dist);

/// Draws n distances by placing points per the cluster construction and
/// returns the gap against the closed-form law.
double empirical_distance_check(const DistanceQuery& query, std::size_t n_samples, std::uint64_t seed);

} // namespace clustercast
