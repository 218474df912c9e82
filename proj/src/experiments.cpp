#include "clustercast/experiments.hpp"

#include "clustercast/analysis.hpp"
#include "clustercast/errors.hpp"
#include "clustercast/geometry.hpp"
#include "clustercast/protocol.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace clustercast {

std::string_view to_string(SweepParam p) noexcept {
  switch (p) {
  case SweepParam::VNorm: return "v_norm";
  case SweepParam::RadiusR: return "radius_r";
  case SweepParam::NumClusters: return "num_clusters";
  case SweepParam::D0: return "d0";
  }
  return "?";
}

void validate(const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ParameterError("sweep", "needs at least one value");
  for (std::size_t i = 1; i < sweep.values.size(); ++i) {
    if (!(sweep.values[i] > sweep.values[i - 1])) throw ParameterError("sweep", "values must be strictly increasing");
  }
}

std::optional<MetricRow> MetricTable::find(std::string_view sweep_param, double sweep_value, std::string_view scheme,
                                           std::string_view metric) const {
  for (const MetricRow& r : rows) {
    if (r.sweep_param == sweep_param && r.sweep_value == sweep_value && r.scheme == scheme && r.metric == metric) {
      return r;
    }
  }
  return std::nullopt;
}

void MetricTable::append(const MetricTable& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

void write_metric_csv(std::ostream& out, const MetricTable& table, bool header) {
  if (header) out << kMetricCsvHeader << '\n';
  char buf[128];
  for (const MetricRow& r : table.rows) {
    out << r.study << ',' << r.sweep_param << ',';
    std::snprintf(buf, sizeof buf, "%.10g", r.sweep_value);
    out << buf << ',' << r.scheme << ',' << r.metric << ',';
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%lld", r.mean, r.std_error, static_cast<long long>(r.n));
    out << buf << '\n';
  }
}

void RunningStats::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::std_error() const noexcept {
  if (n_ < 2) return 0.0;
  const double var = m2_ / static_cast<double>(n_ - 1);
  return std::sqrt(var / static_cast<double>(n_));
}

namespace {

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

MetricRow theory_row(std::string study, std::string param, double x, std::string metric, double value) {
  return {std::move(study), std::move(param), x, "theory", std::move(metric), value, 0.0, 1, true};
}

MetricRow stats_row(std::string study, std::string param, double x, std::string scheme, std::string metric,
                    const RunningStats& s) {
  return {std::move(study), std::move(param), x, std::move(scheme), std::move(metric), s.mean(), s.std_error(),
          s.count(), true};
}

ClusterGeometry geometry_of(const ScenarioConfig& cfg, double v_norm, double radius_r) {
  return {v_norm, radius_r, cfg.h1_m, cfg.h2_m};
}

struct SchemeEpoch {
  bool any_delivered = false;
  double delay_ms = 0.0;
  double delivery_ratio = 0.0;
  double first_attempt_ratio = 0.0;
  double bs_transmissions = 0.0;
  double uav_transmissions = 0.0;
  double control_messages = 0.0;
};

struct GridPoint {
  double d0 = 0.0;
  int num_clusters = 0;
  double radius_r = 0.0;
  std::vector<RunningStats> delay, delivery, first_attempt, bs_tx, uav_tx, control;
};

std::vector<SchemeEpoch> run_epoch(const ScenarioConfig& point_cfg, const SimParams& sim, std::uint64_t epoch_seed) {
  Rng topo_rng = make_rng(epoch_seed, 0);
  const Topology topo = build_topology(point_cfg, topo_rng);
  std::vector<SchemeEpoch> out;
  out.reserve(point_cfg.schemes.size());
  for (Scheme s : point_cfg.schemes) {
    const SchemeOutcome o = run_scheme(s, topo, point_cfg.radio, sim, epoch_seed);
    SchemeEpoch e;
    e.any_delivered = o.delivered_count() > 0;
    e.delay_ms = o.mean_delay_ms();
    e.delivery_ratio = o.delivery_ratio();
    e.first_attempt_ratio = o.first_attempt_success_ratio();
    e.bs_transmissions = static_cast<double>(o.bs_transmissions);
    e.uav_transmissions = static_cast<double>(o.uav_transmissions);
    e.control_messages = static_cast<double>(o.control_messages);
    out.push_back(e);
  }
  return out;
}

/// Runs cfg.replications epochs at every (D0, C) point. Epoch i of point g is
/// seeded with split_seed(split_seed(base_seed, g), i); the topology draws
/// from stream 0 of that seed and all schemes share it.
std::vector<GridPoint> simulate_grid(const ScenarioConfig& cfg, const std::vector<double>& d0_values,
                                     const std::vector<int>& c_values, ExecutionPolicy policy) {
  if (d0_values.empty() || c_values.empty()) throw ParameterError("sweep", "needs at least one value");
  if (cfg.schemes.empty()) throw ParameterError("run.schemes", "must not be empty");
  if (cfg.replications < 1) throw ParameterError("run.replications", "must be >= 1");
  const SimParams sim = sim_params_from(cfg);
  validate(sim);

  std::vector<GridPoint> grid;
  const std::size_t ns = cfg.schemes.size();
  for (double d0 : d0_values) {
    for (int c : c_values) {
      ScenarioConfig point_cfg = cfg;
      point_cfg.d0_m = d0;
      point_cfg.v_norm_m = d0;
      point_cfg.num_clusters = c;
      point_cfg.mode = TopologyMode::FixedTotal;
      GridPoint gp;
      gp.d0 = d0;
      gp.num_clusters = c;
      gp.radius_r = effective_radius(point_cfg);
      point_cfg.radius_r_m = gp.radius_r;
      point_cfg.radius_rule = RadiusRule::Fixed;
      validate(point_cfg);

      const std::uint64_t point_seed = split_seed(cfg.base_seed, grid.size());
      const int reps = cfg.replications;
      std::vector<std::vector<SchemeEpoch>> epochs(static_cast<std::size_t>(reps));
      if (policy == ExecutionPolicy::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int i = 0; i < reps; ++i) {
          epochs[static_cast<std::size_t>(i)] =
              run_epoch(point_cfg, sim, split_seed(point_seed, static_cast<std::uint64_t>(i)));
        }
      } else {
        for (int i = 0; i < reps; ++i) {
          epochs[static_cast<std::size_t>(i)] =
              run_epoch(point_cfg, sim, split_seed(point_seed, static_cast<std::uint64_t>(i)));
        }
      }

      gp.delay.resize(ns);
      gp.delivery.resize(ns);
      gp.first_attempt.resize(ns);
      gp.bs_tx.resize(ns);
      gp.uav_tx.resize(ns);
      gp.control.resize(ns);
      for (const auto& epoch : epochs) {
        for (std::size_t s = 0; s < ns; ++s) {
          const SchemeEpoch& e = epoch[s];
          if (e.any_delivered) gp.delay[s].add(e.delay_ms);
          gp.delivery[s].add(e.delivery_ratio);
          gp.first_attempt[s].add(e.first_attempt_ratio);
          gp.bs_tx[s].add(e.bs_transmissions);
          gp.uav_tx[s].add(e.uav_transmissions);
          gp.control[s].add(e.control_messages);
        }
      }
      grid.push_back(std::move(gp));
    }
  }
  return grid;
}

std::string grid_param(double d0) { return "num_clusters@d0=" + format_g(d0); }

MetricInputs inputs_at(const ScenarioConfig& cfg, double v_norm, double radius_r) {
  MetricInputs in;
  in.geom = geometry_of(cfg, v_norm, radius_r);
  in.radio = cfg.radio;
  in.lambda_off_per_m2 = cfg.lambda_off_per_m2;
  in.packet_len_ms = cfg.packet_len_ms;
  in.t_req_ms = cfg.t_req_ms;
  return in;
}

} // namespace

MetricTable run_validation_study(ValidationKind kind, const ScenarioConfig& cfg, const SweepSpec& sweep,
                                 const StudyOptions& opts) {
  validate(sweep);
  validate(cfg.radio);
  if (opts.mc_trials < 2) throw ParameterError("mc_trials", "must be >= 2");
  const bool coverage = kind == ValidationKind::CoverageVsV;
  if (coverage && sweep.parameter != SweepParam::VNorm) throw ParameterError("sweep", "coverage study sweeps v_norm");
  if (!coverage && sweep.parameter != SweepParam::RadiusR) {
    throw ParameterError("sweep", "success study sweeps radius_r");
  }
  const std::string study = coverage ? "coverage_vs_v" : "success_vs_r";
  const std::string param(to_string(sweep.parameter));
  const std::string metric = coverage ? "p_cov" : "p_suc";

  MetricTable table;
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const double x = sweep.values[i];
    const std::uint64_t seed = split_seed(cfg.base_seed, i);
    double theory = 0.0;
    kernels::BernoulliTally mc;
    if (coverage) {
      const ClusterGeometry geom = geometry_of(cfg, x, cfg.radius_r_m);
      theory = coverage_probability(geom, cfg.radio);
      mc = kernels::coverage_trials(opts.policy, geom, cfg.radio, opts.mc_trials, seed);
    } else {
      theory = transmission_success_probability(x, cfg.radio);
      mc = kernels::link_success_trials(opts.policy, x, cfg.radio, opts.mc_trials, seed);
    }
    table.rows.push_back(theory_row(study, param, x, metric, theory));
    table.rows.push_back({study, param, x, "monte_carlo", metric, mc.mean(), mc.std_error(), mc.trials, true});
  }
  return table;
}

MetricTable run_design_insight_study(const ScenarioConfig& cfg, const std::vector<int>& c_values,
                                     const std::vector<double>& v_values) {
  if (c_values.empty() || v_values.empty()) throw ParameterError("sweep", "needs at least one value");
  validate(cfg.radio);
  const std::string study = "design_insight";
  MetricTable table;
  for (double v : v_values) {
    const std::string param = "num_clusters@v_norm=" + format_g(v);
    for (int c : c_values) {
      const double r = effective_radius(cfg, c);
      const int peers = peer_count(cfg.lambda_off_per_m2, r);
      const double x = static_cast<double>(c);
      table.rows.push_back(theory_row(study, param, x, "radius_r", r));
      table.rows.push_back(theory_row(study, param, x, "peer_count", peers));
      if (peers < 1 || !(v > r)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        table.rows.push_back({study, param, x, "theory", "p_req", nan, 0.0, 0, false});
        continue;
      }
      const ClusterGeometry geom = geometry_of(cfg, v, r);
      const double p_cov = coverage_probability(geom, cfg.radio);
      const double p_suc = transmission_success_probability(r, cfg.radio);
      table.rows.push_back(theory_row(study, param, x, "p_cov", p_cov));
      table.rows.push_back(theory_row(study, param, x, "p_suc", p_suc));
      table.rows.push_back(theory_row(study, param, x, "p_req", request_success_probability(p_cov, p_suc, peers)));
    }
  }
  return table;
}

MetricTable run_delay_study(const ScenarioConfig& cfg, const std::vector<double>& d0_values,
                            const std::vector<int>& c_values, const StudyOptions& opts) {
  const std::vector<GridPoint> grid = simulate_grid(cfg, d0_values, c_values, opts.policy);
  const std::string study = "delay";
  MetricTable table;
  for (const GridPoint& gp : grid) {
    const std::string param = grid_param(gp.d0);
    const double x = gp.num_clusters;
    const MetricResults m = evaluate_metrics(inputs_at(cfg, gp.d0, gp.radius_r));
    table.rows.push_back(theory_row(study, param, x, "delay_ms", m.delay_aver_ms));
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      const std::string scheme(to_string(cfg.schemes[s]));
      table.rows.push_back(stats_row(study, param, x, scheme, "delay_ms", gp.delay[s]));
      table.rows.push_back(stats_row(study, param, x, scheme, "delivery_ratio", gp.delivery[s]));
      table.rows.push_back(stats_row(study, param, x, scheme, "bs_transmissions", gp.bs_tx[s]));
      table.rows.push_back(stats_row(study, param, x, scheme, "uav_transmissions", gp.uav_tx[s]));
      table.rows.push_back(stats_row(study, param, x, scheme, "control_messages", gp.control[s]));
    }
  }
  return table;
}

MetricTable run_ase_study(const ScenarioConfig& cfg, const std::vector<double>& d0_values,
                          const std::vector<int>& c_values, const StudyOptions& opts) {
  const std::vector<GridPoint> grid = simulate_grid(cfg, d0_values, c_values, opts.policy);
  const std::string study = "ase";
  const double peak = cfg.lambda_off_per_m2 * std::log2(1.0 + cfg.radio.snr_threshold);
  MetricTable table;
  for (const GridPoint& gp : grid) {
    const std::string param = grid_param(gp.d0);
    const double x = gp.num_clusters;
    const MetricResults m = evaluate_metrics(inputs_at(cfg, gp.d0, gp.radius_r));
    table.rows.push_back(theory_row(study, param, x, "ase", m.ase_aver));
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      const RunningStats& fa = gp.first_attempt[s];
      table.rows.push_back({study, param, x, std::string(to_string(cfg.schemes[s])), "ase", peak * fa.mean(),
                            peak * fa.std_error(), fa.count(), true});
    }
  }
  return table;
}

} // namespace clustercast
