#pragma once

#include "clustercast/random.hpp"

namespace clustercast {

enum class LinkKind { BsToUav, UavToUav };

/// Log-distance path loss in the WINNER II form
///   PL_dB = pl0 + A * log10(d [m]) + B * log10(fc [GHz] / 5).
struct PathLossParams {
  double pl0_db = 0.0;
  double dist_coeff_a = 0.0;
  double freq_coeff_b = 0.0;
  double carrier_freq_ghz = 5.0;

  bool operator==(const PathLossParams&) const = default;
};

/// Radio configuration of the BS downlink and the UAV-to-UAV link.
/// Defaults are the reference deployment (1 W BS, 10 mW UAVs, 20 MHz,
/// -174 dBm/Hz, threshold 20 as a linear ratio).
struct RadioParams {
  double p_bs_mw = 1000.0;
  double p_uav_mw = 10.0;
  double bandwidth_hz = 20e6;
  double noise_density_mw_per_hz = 0.0; // set from -174 dBm/Hz in the constructor
  double snr_threshold = 20.0;
  PathLossParams bs_to_uav{39.0, 26.0, 20.0, 2.0};
  PathLossParams uav_to_uav{41.0, 22.7, 20.0, 5.8};

  RadioParams();

  const PathLossParams& path_loss(LinkKind kind) const noexcept {
    return kind == LinkKind::BsToUav ? bs_to_uav : uav_to_uav;
  }
  double tx_power_mw(LinkKind kind) const noexcept {
    return kind == LinkKind::BsToUav ? p_bs_mw : p_uav_mw;
  }
  double noise_power_mw() const noexcept { return bandwidth_hz * noise_density_mw_per_hz; }

  bool operator==(const RadioParams&) const = default;
};

/// Throws ParameterError naming the first violated field.
void validate(const RadioParams& radio);

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;
double dbm_to_mw(double dbm) noexcept;

/// Distances below this are clamped before evaluating the log-distance law.
inline constexpr double kReferenceDistanceM = 1.0;

struct PathLoss {
  double gain = 0.0; // linear, <= 1 in practice
  bool clamped = false;
};

PathLoss evaluate_path_loss(LinkKind kind, double distance_m, const RadioParams& radio) noexcept;

inline double path_loss_linear(LinkKind kind, double distance_m, const RadioParams& radio) noexcept {
  return evaluate_path_loss(kind, distance_m, radio).gain;
}

/// |h|^2 for Rayleigh fading: Exponential with unit mean.
double sample_power_fading(Rng& rng);

/// Inverse CDF of the unit exponential, exposed for deterministic tests.
double power_fading_quantile(double u);

double snr(double p_tx_mw, double path_gain, double fading, const RadioParams& radio) noexcept;

/// P[SNR > threshold] at a fixed distance under Rayleigh fading:
/// exp(-threshold * B * N0 / (p_tx * PL(d))).
double success_probability(double p_tx_mw, double distance_m, LinkKind kind,
                           const RadioParams& radio) noexcept;

/// One transmission attempt with a fresh fading draw.
bool reception_success(double p_tx_mw, double distance_m, LinkKind kind,
                       const RadioParams& radio, Rng& rng);

} // namespace clustercast
