#include "clustercast/analysis.hpp"

#include "clustercast/errors.hpp"
#include "clustercast/quadrature.hpp"
#include "clustercast/scenario.hpp"

#include <cmath>

namespace clustercast {

namespace {

constexpr double kMetricTolerance = 1e-6;

void require_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(field, "must lie in [0, 1]");
}

} // namespace

double coverage_probability(const ClusterGeometry& geom, const RadioParams& radio) {
  validate(geom);
  const Support s = d1_support(geom);
  const auto integrand = [&](double d1) {
    return success_probability(radio.p_bs_mw, d1, LinkKind::BsToUav, radio) * pdf_d1(d1, geom);
  };
  return integrate(integrand, s.lo, s.hi, kMetricTolerance).value;
}

double transmission_success_probability(double radius_r, const RadioParams& radio) {
  if (!(radius_r > 0.0)) throw ParameterError("radius_r", "must be positive");
  const auto inner = [&](double a) {
    const auto f = [&](double d2) {
      return success_probability(radio.p_uav_mw, d2, LinkKind::UavToUav, radio) * pdf_d2(d2, a, radius_r);
    };
    // Split at the full-circle junction and at the 1 m path-loss floor.
    return integrate(f, 0.0, radius_r + a, kMetricTolerance, {radius_r - a, kReferenceDistanceM}).value;
  };
  const auto outer = [&](double a) { return inner(a) * pdf_a(a, radius_r); };
  return integrate(outer, 0.0, radius_r, kMetricTolerance).value;
}

double request_success_probability(double p_cov, double p_suc, int peers) {
  require_probability(p_cov, "p_cov");
  require_probability(p_suc, "p_suc");
  if (peers < 1) throw ParameterError("lambda_off_per_m2", "floor(lambda_off * pi * r^2) is 0: cluster has no peers");
  return (1.0 - std::pow(1.0 - p_cov, peers)) * p_suc;
}

double request_success_probability(double p_cov, double p_suc, double lambda_off_per_m2, double radius_r) {
  return request_success_probability(p_cov, p_suc, peer_count(lambda_off_per_m2, radius_r));
}

double average_delay(double p_cov, double p_suc, double packet_len_ms, double t_req_ms) {
  require_probability(p_cov, "p_cov");
  require_probability(p_suc, "p_suc");
  if (p_suc == 0.0) throw NumericError("average delay diverges: p_suc = 0");
  return p_cov * packet_len_ms + (1.0 - p_cov) * (packet_len_ms + (packet_len_ms + t_req_ms) / p_suc);
}

double average_ase(double p_cov, double p_suc, double lambda_off_per_m2, double snr_threshold) {
  if (!(snr_threshold > 0.0)) throw ParameterError("snr_threshold", "must be positive");
  const double peak = lambda_off_per_m2 * std::log2(1.0 + snr_threshold);
  return p_cov * peak + (1.0 - p_cov) * p_suc * peak;
}

MetricResults evaluate_metrics(const MetricInputs& in) {
  validate(in.radio);
  if (!(in.packet_len_ms > 0.0)) throw ParameterError("packet_len_ms", "must be positive");
  if (!(in.t_req_ms >= 0.0)) throw ParameterError("t_req_ms", "must be >= 0");
  MetricResults out;
  out.p_cov = coverage_probability(in.geom, in.radio);
  out.p_suc = transmission_success_probability(in.geom.radius_r, in.radio);
  out.peer_count = peer_count(in.lambda_off_per_m2, in.geom.radius_r);
  out.p_req = request_success_probability(out.p_cov, out.p_suc, out.peer_count);
  out.delay_aver_ms = average_delay(out.p_cov, out.p_suc, in.packet_len_ms, in.t_req_ms);
  out.ase_aver = average_ase(out.p_cov, out.p_suc, in.lambda_off_per_m2, in.radio.snr_threshold);
  return out;
}

} // namespace clustercast
