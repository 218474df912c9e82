#include "clustercast/distributions.hpp"

#include "clustercast/errors.hpp"
#include "clustercast/kernels.hpp"
#include "clustercast/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace clustercast {

std::string_view to_string(DistanceKind k) noexcept {
  switch (k) {
  case DistanceKind::D1Hat: return "d1hat";
  case DistanceKind::D1: return "d1";
  case DistanceKind::D2: return "d2";
  case DistanceKind::A: return "a";
  }
  return "?";
}

std::optional<DistanceKind> parse_distance_kind(std::string_view text) noexcept {
  for (DistanceKind k : {DistanceKind::D1Hat, DistanceKind::D1, DistanceKind::D2, DistanceKind::A}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

void validate(const ClusterGeometry& geom) {
  if (!(geom.radius_r > 0.0) || !std::isfinite(geom.radius_r)) {
    throw ParameterError("radius_r", "must be positive");
  }
  if (!(geom.v_norm > geom.radius_r) || !std::isfinite(geom.v_norm)) {
    throw ParameterError("v_norm", "far-deployment constraint violated: v_norm must exceed radius_r");
  }
  if (!std::isfinite(geom.h1) || !std::isfinite(geom.h2) || geom.h1 < 0.0 || geom.h2 < 0.0) {
    throw ParameterError("h1/h2", "heights must be finite and >= 0");
  }
}

namespace {

constexpr double kAcosSlack = 1e-12;

// Half-angle of the arc of radius d (centered `offset` away from the disk
// center) that lies inside the disk. Equals acos((d^2+offset^2-r^2)/(2 offset d))
// but uses factored 1 -/+ cos forms so it stays accurate where the argument
// approaches -1 or 1.
double lens_angle(double d, double offset, double r) {
  const double denom = 2.0 * offset * d;
  double one_minus = (r - d + offset) * (r + d - offset) / denom;
  double one_plus = (d + offset - r) * (d + offset + r) / denom;
  if (one_minus < -kAcosSlack || one_plus < -kAcosSlack) {
    std::ostringstream msg;
    msg << "arcsin argument " << 1.0 - one_minus << " outside [-1, 1]";
    throw IntegrityError(msg.str());
  }
  one_minus = std::max(0.0, one_minus);
  one_plus = std::max(0.0, one_plus);
  return 2.0 * std::atan2(std::sqrt(one_minus), std::sqrt(one_plus));
}

// Planar density shared by d1_hat and d2: point at distance `offset` from the
// disk center, distance `d` to a uniform point of the disk.
double ring_density(double d, double offset, double r) {
  return 2.0 * d / (std::numbers::pi * r * r) * lens_angle(d, offset, r);
}

} // namespace

Support d1_hat_support(const ClusterGeometry& geom) noexcept {
  return {geom.v_norm - geom.radius_r, geom.v_norm + geom.radius_r};
}

Support d1_support(const ClusterGeometry& geom) noexcept {
  const double dh2 = geom.height_gap() * geom.height_gap();
  const Support s = d1_hat_support(geom);
  return {std::sqrt(s.lo * s.lo + dh2), std::sqrt(s.hi * s.hi + dh2)};
}

Support d2_support(double a, double radius_r) noexcept { return {0.0, radius_r + a}; }

double pdf_d1_hat(double d1_hat, const ClusterGeometry& geom) {
  if (!d1_hat_support(geom).contains(d1_hat) || d1_hat <= 0.0) return 0.0;
  return ring_density(d1_hat, geom.v_norm, geom.radius_r);
}

double pdf_d1(double d1, const ClusterGeometry& geom) {
  if (!d1_support(geom).contains(d1)) return 0.0;
  const double dh2 = geom.height_gap() * geom.height_gap();
  const double d_hat = std::sqrt(std::max(0.0, d1 * d1 - dh2));
  if (d_hat <= 0.0) return 0.0;
  const double r = geom.radius_r;
  return 2.0 * d1 / (std::numbers::pi * r * r) * lens_angle(d_hat, geom.v_norm, r);
}

double pdf_d2(double d2, double a, double radius_r) {
  if (!(radius_r > 0.0)) throw ParameterError("radius_r", "must be positive");
  if (a < 0.0 || a > radius_r) throw ParameterError("a", "must satisfy 0 <= a <= r");
  if (d2 < 0.0 || d2 > radius_r + a) return 0.0;
  if (d2 <= radius_r - a) return 2.0 * d2 / (radius_r * radius_r);
  return ring_density(d2, a, radius_r);
}

double pdf_a(double a, double radius_r) {
  if (a < 0.0 || a > radius_r) return 0.0;
  return 2.0 * a / (radius_r * radius_r);
}

ConditionalDistanceDistribution::ConditionalDistanceDistribution(DistanceKind kind,
                                                                 std::function<double(double)> pdf,
                                                                 Support support,
                                                                 std::vector<double> breakpoints,
                                                                 std::size_t grid_points)
    : kind_(kind), pdf_(std::move(pdf)), support_(support), breakpoints_(std::move(breakpoints)) {
  if (!(support_.hi >= support_.lo)) throw ParameterError("support", "hi must be >= lo");
  if (support_.hi == support_.lo) {
    grid_ = {support_.lo};
    cdf_ = {1.0};
    return;
  }
  grid_points = std::max<std::size_t>(grid_points, 2048);

  total_mass_ = integrate(pdf_, support_.lo, support_.hi, 1e-8, breakpoints_).value;
  if (std::abs(total_mass_ - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "distribution " << to_string(kind_) << " is not normalized: integral = " << total_mass_;
    throw IntegrityError(msg.str());
  }

  grid_.resize(grid_points);
  cdf_.resize(grid_points);
  const double step = (support_.hi - support_.lo) / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) grid_[i] = support_.lo + step * static_cast<double>(i);
  grid_.back() = support_.hi;

  cdf_[0] = 0.0;
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double cell = boost::math::quadrature::gauss<double, 10>::integrate(pdf_, grid_[i - 1], grid_[i]);
    cdf_[i] = cdf_[i - 1] + std::max(0.0, cell);
  }
  const double norm = cdf_.back();
  for (double& c : cdf_) c /= norm;
  cdf_.back() = 1.0;
}

double ConditionalDistanceDistribution::cdf(double x) const noexcept {
  if (x < grid_.front()) return 0.0;
  if (x >= grid_.back()) return 1.0;
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto i = static_cast<std::size_t>(it - grid_.begin());
  const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
  return cdf_[i - 1] + t * (cdf_[i] - cdf_[i - 1]);
}

double ConditionalDistanceDistribution::quantile(double u) const noexcept {
  if (grid_.size() == 1) return grid_.front();
  if (u <= 0.0) return grid_.front();
  if (u >= 1.0) return grid_.back();
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  if (i == 0) return grid_.front();
  const double span = cdf_[i] - cdf_[i - 1];
  const double t = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
  return grid_[i - 1] + t * (grid_[i] - grid_[i - 1]);
}

double ConditionalDistanceDistribution::sample(Rng& rng) const { return quantile(uniform01(rng)); }

double ConditionalDistanceDistribution::ks_self_check(std::size_t n, Rng& rng) const {
  std::vector<double> xs(n);
  for (double& x : xs) x = sample(rng);
  return empirical_cdf_gap(std::move(xs), *this);
}

ConditionalDistanceDistribution make_d1_hat_distribution(const ClusterGeometry& geom) {
  validate(geom);
  return {DistanceKind::D1Hat, [geom](double d) { return pdf_d1_hat(d, geom); }, d1_hat_support(geom)};
}

ConditionalDistanceDistribution make_d1_distribution(const ClusterGeometry& geom) {
  validate(geom);
  return {DistanceKind::D1, [geom](double d) { return pdf_d1(d, geom); }, d1_support(geom)};
}

ConditionalDistanceDistribution make_d2_distribution(double a, double radius_r) {
  if (!(radius_r > 0.0)) throw ParameterError("radius_r", "must be positive");
  if (a < 0.0 || a > radius_r) throw ParameterError("a", "must satisfy 0 <= a <= r");
  return {DistanceKind::D2, [a, radius_r](double d) { return pdf_d2(d, a, radius_r); },
          d2_support(a, radius_r), std::vector<double>{radius_r - a}};
}

ConditionalDistanceDistribution make_a_distribution(double radius_r) {
  if (!(radius_r > 0.0)) throw ParameterError("radius_r", "must be positive");
  return {DistanceKind::A, [radius_r](double a) { return pdf_a(a, radius_r); }, Support{0.0, radius_r}};
}

ConditionalDistanceDistribution DistanceQuery::distribution() const {
  switch (kind) {
  case DistanceKind::D1Hat: return make_d1_hat_distribution(geom);
  case DistanceKind::D1: return make_d1_distribution(geom);
  case DistanceKind::D2: return make_d2_distribution(a, geom.radius_r);
  case DistanceKind::A: return make_a_distribution(geom.radius_r);
  }
  throw ParameterError("kind", "unknown distance kind");
}

double empirical_cdf_gap(std::vector<double> samples, const ConditionalDistanceDistribution& dist) {
  if (samples.empty()) throw ParameterError("n_samples", "must be positive");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = dist.cdf(samples[i]);
    gap = std::max({gap, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return gap;
}

double empirical_distance_check(const DistanceQuery& query, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw ParameterError("n_samples", "must be >= 1000");
  const ConditionalDistanceDistribution dist = query.distribution();
  return empirical_cdf_gap(kernels::parallel::distance_samples(query, n_samples, seed), dist);
}

} // namespace clustercast
