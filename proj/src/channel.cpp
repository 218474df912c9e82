#include "clustercast/channel.hpp"

#include "clustercast/errors.hpp"

#include <cmath>
#include <random>

namespace clustercast {

RadioParams::RadioParams() : noise_density_mw_per_hz(dbm_to_mw(-174.0)) {}

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(field, "must be positive and finite");
  }
}

void validate_path_loss(const PathLossParams& p, const char* prefix) {
  const std::string base(prefix);
  if (!std::isfinite(p.pl0_db)) throw ParameterError(base + ".pl0_db", "must be finite");
  if (!std::isfinite(p.dist_coeff_a)) throw ParameterError(base + ".dist_coeff_a", "must be finite");
  if (!std::isfinite(p.freq_coeff_b)) throw ParameterError(base + ".freq_coeff_b", "must be finite");
  if (!(p.carrier_freq_ghz > 0.0) || !std::isfinite(p.carrier_freq_ghz)) {
    throw ParameterError(base + ".carrier_freq_ghz", "must be positive");
  }
}

} // namespace

void validate(const RadioParams& radio) {
  require_positive(radio.p_bs_mw, "radio.p_bs_mw");
  require_positive(radio.p_uav_mw, "radio.p_uav_mw");
  require_positive(radio.bandwidth_hz, "radio.bandwidth_hz");
  require_positive(radio.noise_density_mw_per_hz, "radio.noise_density_mw_per_hz");
  require_positive(radio.snr_threshold, "radio.snr_threshold");
  validate_path_loss(radio.bs_to_uav, "radio.bs_to_uav");
  validate_path_loss(radio.uav_to_uav, "radio.uav_to_uav");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

double dbm_to_mw(double dbm) noexcept { return db_to_linear(dbm); }

PathLoss evaluate_path_loss(LinkKind kind, double distance_m, const RadioParams& radio) noexcept {
  const PathLossParams& p = radio.path_loss(kind);
  PathLoss out;
  double d = distance_m;
  if (!(d >= kReferenceDistanceM)) {
    d = kReferenceDistanceM;
    out.clamped = true;
  }
  const double loss_db = p.pl0_db + p.dist_coeff_a * std::log10(d) +
                         p.freq_coeff_b * std::log10(p.carrier_freq_ghz / 5.0);
  out.gain = db_to_linear(-loss_db);
  return out;
}

double sample_power_fading(Rng& rng) {
  return std::exponential_distribution<double>(1.0)(rng);
}

double power_fading_quantile(double u) { return -std::log1p(-u); }

double snr(double p_tx_mw, double path_gain, double fading, const RadioParams& radio) noexcept {
  return p_tx_mw * path_gain * fading / radio.noise_power_mw();
}

double success_probability(double p_tx_mw, double distance_m, LinkKind kind,
                           const RadioParams& radio) noexcept {
  const double pl = path_loss_linear(kind, distance_m, radio);
  return std::exp(-radio.snr_threshold * radio.noise_power_mw() / (p_tx_mw * pl));
}

bool reception_success(double p_tx_mw, double distance_m, LinkKind kind,
                       const RadioParams& radio, Rng& rng) {
  const double pl = path_loss_linear(kind, distance_m, radio);
  return snr(p_tx_mw, pl, sample_power_fading(rng), radio) > radio.snr_threshold;
}

} // namespace clustercast
