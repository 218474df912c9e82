#pragma once

#include "clustercast/channel.hpp"
#include "clustercast/distributions.hpp"

namespace clustercast {

struct MetricInputs {
  ClusterGeometry geom{};
  RadioParams radio{};
  double lambda_off_per_m2 = 1e-3;
  double packet_len_ms = 10.0;
  double t_req_ms = 1.0;
};

struct MetricResults {
  double p_cov = 0.0;
  double p_suc = 0.0;
  double p_req = 0.0;
  double delay_aver_ms = 0.0;
  double ase_aver = 0.0; // bits/s/Hz/m^2
  int peer_count = 0;
};

/// Probability that a uniformly placed cluster UAV decodes the BS broadcast:
/// E over the BS-to-UAV distance law of exp(-threshold * B * N0 / (p_bs * PL(d1))).
double coverage_probability(const ClusterGeometry& geom, const RadioParams& radio);

/// Probability that a link between two uniform UAVs of one cluster clears the
/// threshold; double integral over the offset a of the typical UAV and the
/// conditional peer distance d2.
double transmission_success_probability(double radius_r, const RadioParams& radio);

/// [1 - (1 - p_cov)^peers] * p_suc. Throws ParameterError when peers < 1.
double request_success_probability(double p_cov, double p_suc, int peers);

/// Same, with peers = floor(lambda_off * pi * r^2).
double request_success_probability(double p_cov, double p_suc, double lambda_off_per_m2, double radius_r);

/// p_cov * L + (1 - p_cov) * (L + (L + t_req) / p_suc). Throws NumericError when p_suc == 0.
double average_delay(double p_cov, double p_suc, double packet_len_ms, double t_req_ms);

/// (p_cov + (1 - p_cov) * p_suc) * lambda_off * log2(1 + threshold).
double average_ase(double p_cov, double p_suc, double lambda_off_per_m2, double snr_threshold);

MetricResults evaluate_metrics(const MetricInputs& in);

} // namespace clustercast
