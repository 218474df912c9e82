#pragma once

// Parameter sweeps over the closed-form metrics and the protocol simulator.
// Every study returns a MetricTable whose CSV form is
//   study,sweep_param,sweep_value,scheme,metric,mean,stderr,n
// Closed-form rows use scheme "theory" with stderr 0 and n 1.

#include "clustercast/kernels.hpp"
#include "clustercast/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clustercast {

enum class SweepParam { VNorm, RadiusR, NumClusters, D0 };

std::string_view to_string(SweepParam p) noexcept;

struct SweepSpec {
  SweepParam parameter = SweepParam::VNorm;
  std::vector<double> values;
};

/// Throws ParameterError unless values is non-empty and strictly increasing.
void validate(const SweepSpec& sweep);

struct MetricRow {
  std::string study;
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string scheme;
  std::string metric;
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  /// False for grid points where the metric is undefined (mean is NaN, n is 0).
  bool valid = true;

  bool operator==(const MetricRow&) const = default;
};

struct MetricTable {
  std::vector<MetricRow> rows;

  /// First row matching all keys, if any.
  std::optional<MetricRow> find(std::string_view sweep_param, double sweep_value, std::string_view scheme,
                                std::string_view metric) const;
  void append(const MetricTable& other);
};

inline constexpr const char* kMetricCsvHeader = "study,sweep_param,sweep_value,scheme,metric,mean,stderr,n";
void write_metric_csv(std::ostream& out, const MetricTable& table, bool header = true);

/// Running mean and standard error of a sample (Welford).
class RunningStats {
public:
  void add(double x) noexcept;
  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Sample standard deviation / sqrt(n); 0 below two samples.
  double std_error() const noexcept;

private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

enum class ValidationKind { CoverageVsV, SuccessVsR };

struct StudyOptions {
  ExecutionPolicy policy = ExecutionPolicy::Parallel;
  /// Monte Carlo trials per sweep value for the validation study.
  std::int64_t mc_trials = 100000;
};

/// Quadrature metric ("theory") next to its Monte Carlo estimate
/// ("monte_carlo") at each sweep value. CoverageVsV sweeps v_norm (metric
/// p_cov); SuccessVsR sweeps radius_r (metric p_suc).
MetricTable run_validation_study(ValidationKind kind, const ScenarioConfig& cfg, const SweepSpec& sweep,
                                 const StudyOptions& opts = {});

/// Request success probability over a (C, v_norm) grid. r follows the
/// config's radius rule. sweep_param is "num_clusters@v_norm=<v>". Grid points
/// whose cluster holds no peer are emitted with valid = false.
MetricTable run_design_insight_study(const ScenarioConfig& cfg, const std::vector<int>& c_values,
                                     const std::vector<double>& v_values);

/// Per-(D0, C) protocol replications for every scheme in cfg.schemes.
/// sweep_param is "num_clusters@d0=<d0>". Simulated metrics per scheme:
/// delay_ms (mean per-UAV delivery time, epochs without any delivery
/// excluded), delivery_ratio, bs_transmissions, uav_transmissions,
/// control_messages; plus the closed-form delay_ms with v_norm = D0.
MetricTable run_delay_study(const ScenarioConfig& cfg, const std::vector<double>& d0_values,
                            const std::vector<int>& c_values, const StudyOptions& opts = {});

/// Same grid. Simulated ase per scheme: lambda_off * log2(1 + threshold) times
/// the fraction of UAVs whose first delivery attempt succeeded; plus the
/// closed-form ase with v_norm = D0.
MetricTable run_ase_study(const ScenarioConfig& cfg, const std::vector<double>& d0_values,
                          const std::vector<int>& c_values, const StudyOptions& opts = {});

} // namespace clustercast
