#include "clustercast/cli.hpp"

#include "clustercast/analysis.hpp"
#include "clustercast/config.hpp"
#include "clustercast/distributions.hpp"
#include "clustercast/errors.hpp"
#include "clustercast/experiments.hpp"
#include "clustercast/geometry.hpp"
#include "clustercast/protocol.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

namespace clustercast {

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> per_key;
  std::vector<std::pair<std::string, std::string>> aliases; // flag value -> config key
};

struct DistributionsOptions {
  std::string kind = "d1";
  double a = 25.0;
  std::size_t samples = 100000;
};

struct SimulateOptions {
  std::string scheme = "clustering";
  std::string event_log;
};

struct StudyCliOptions {
  std::string name = "all";
  std::int64_t mc_trials = 100000;
  bool serial = false;
  std::string radius_rule = "density_preserving";
  std::vector<double> v_values{200, 400, 600, 800, 1000, 1200};
  std::vector<double> r_values{10, 25, 50, 75, 100};
  std::vector<int> c_values{2, 4, 6, 8, 10};
  std::vector<double> design_v_values{400, 800, 1200};
  std::vector<double> d0_values{400, 800, 1200};
  std::vector<int> sim_c_values{2, 5, 10};
};

/// Destination for one result file: a file under --out-dir, or `fallback`.
class Sink {
public:
  Sink(const std::string& out_dir, const std::string& name, std::ostream& fallback) {
    if (out_dir.empty()) {
      stream_ = &fallback;
      return;
    }
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ConfigError("out_dir", "cannot write '" + path.string() + "'");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

void report(std::ostream& err, const char* kind, const std::string& field, const std::string& message) {
  err << "error kind=" << kind << " field=" << (field.empty() ? "-" : field) << " message=" << quote(message)
      << '\n';
}

ScenarioConfig effective_config(const GlobalOptions& g) {
  ScenarioConfig cfg;
  if (!g.config_path.empty()) cfg = load_config_file(g.config_path, cfg);
  for (const std::string& a : g.assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("set", "expected key=value, got '" + a + "'");
    apply_config_value(cfg, a.substr(0, eq), a.substr(eq + 1));
  }
  for (const auto& [key, value] : g.per_key) apply_config_value(cfg, key, value);
  for (const auto& [value, key] : g.aliases) apply_config_value(cfg, key, value);
  return cfg;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  char buf[64];
  bool first = true;
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    out << (first ? "" : ",") << buf;
    first = false;
  }
  out << '\n';
}

int cmd_topology(const ScenarioConfig& cfg, const GlobalOptions& g, int drops, std::ostream& out) {
  Sink sink(g.out_dir, "topology.csv", out);
  *sink << kTopologyCsvHeader << '\n';
  for (int d = 0; d < drops; ++d) {
    Rng rng = make_rng(cfg.base_seed, static_cast<std::uint64_t>(d));
    write_topology_csv_rows(*sink, build_topology(cfg, rng), d);
  }
  return kExitOk;
}

int cmd_distributions(const ScenarioConfig& cfg, const GlobalOptions& g, const DistributionsOptions& o,
                      std::ostream& out, std::ostream& err) {
  const auto kind = parse_distance_kind(o.kind);
  if (!kind) throw ConfigError("kind", "expected d1hat, d1, d2 or a");
  DistanceQuery q;
  q.kind = *kind;
  q.geom = {cfg.v_norm_m, cfg.radius_r_m, cfg.h1_m, cfg.h2_m};
  q.a = o.a;
  const ConditionalDistanceDistribution dist = q.distribution();
  {
    Sink sink(g.out_dir, "distribution.csv", out);
    *sink << "x,pdf,cdf\n";
    const auto grid = dist.grid();
    const auto cdf = dist.cdf_table();
    for (std::size_t i = 0; i < grid.size(); ++i) write_row(*sink, {grid[i], dist.pdf(grid[i]), cdf[i]});
  }
  const double gap = empirical_distance_check(q, o.samples, cfg.base_seed);
  Sink ks(g.out_dir, "ks_report.csv", err);
  *ks << "kind,samples,ks_gap\n" << to_string(q.kind) << ',' << o.samples << ',';
  write_row(*ks, {gap});
  return kExitOk;
}

int cmd_metrics(const ScenarioConfig& cfg, const GlobalOptions& g, std::ostream& out) {
  MetricInputs in;
  in.geom = {cfg.v_norm_m, effective_radius(cfg), cfg.h1_m, cfg.h2_m};
  in.radio = cfg.radio;
  in.lambda_off_per_m2 = cfg.lambda_off_per_m2;
  in.packet_len_ms = cfg.packet_len_ms;
  in.t_req_ms = cfg.t_req_ms;
  const MetricResults m = evaluate_metrics(in);
  Sink sink(g.out_dir, "metrics.csv", out);
  *sink << "v_norm_m,radius_r_m,peer_count,p_cov,p_suc,p_req,delay_aver_ms,ase_aver\n";
  write_row(*sink, {in.geom.v_norm, in.geom.radius_r, static_cast<double>(m.peer_count), m.p_cov, m.p_suc, m.p_req,
                    m.delay_aver_ms, m.ase_aver});
  return kExitOk;
}

int cmd_simulate(const ScenarioConfig& cfg, const GlobalOptions& g, const SimulateOptions& o, std::ostream& out,
                 std::ostream& err) {
  const auto scheme = parse_scheme(o.scheme);
  if (!scheme) throw ConfigError("scheme", "expected clustering, benchmark or rnc");
  Rng topo_rng = make_rng(cfg.base_seed, 0);
  const Topology topo = build_topology(cfg, topo_rng);
  SimParams sim = sim_params_from(cfg);
  sim.record_events = !o.event_log.empty();
  const SchemeOutcome outcome = run_scheme(*scheme, topo, cfg.radio, sim, split_seed(cfg.base_seed, 1));
  {
    Sink sink(g.out_dir, "outcome.csv", out);
    *sink << kOutcomeCsvHeader << '\n';
    write_outcome_csv_rows(*sink, outcome);
  }
  if (!o.event_log.empty()) {
    std::ofstream log(o.event_log);
    if (!log) throw ConfigError("event_log", "cannot write '" + o.event_log + "'");
    log << kEventLogCsvHeader << '\n';
    write_event_log_csv(log, outcome.events);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "scheme=%s uavs=%zu delivered=%d mean_delay_ms=%.6f bs_tx=%lld uav_tx=%lld control=%lld\n",
                o.scheme.c_str(), outcome.uavs.size(), outcome.delivered_count(), outcome.mean_delay_ms(),
                static_cast<long long>(outcome.bs_transmissions), static_cast<long long>(outcome.uav_transmissions),
                static_cast<long long>(outcome.control_messages));
  err << buf;
  return kExitOk;
}

int cmd_study(ScenarioConfig cfg, const GlobalOptions& g, const StudyCliOptions& o, std::ostream& out) {
  static const std::vector<std::string> kNames{"coverage", "success", "design", "delay", "ase"};
  if (o.name != "all" && std::find(kNames.begin(), kNames.end(), o.name) == kNames.end()) {
    throw ConfigError("name", "expected coverage, success, design, delay, ase or all");
  }
  const auto rule = parse_radius_rule(o.radius_rule);
  if (!rule) throw ConfigError("radius_rule", "expected fixed or density_preserving");
  StudyOptions opts;
  opts.mc_trials = o.mc_trials;
  opts.policy = o.serial ? ExecutionPolicy::Serial : ExecutionPolicy::Parallel;

  bool header = true;
  for (const std::string& name : kNames) {
    if (o.name != "all" && o.name != name) continue;
    MetricTable table;
    if (name == "coverage") {
      table = run_validation_study(ValidationKind::CoverageVsV, cfg, {SweepParam::VNorm, o.v_values}, opts);
    } else if (name == "success") {
      table = run_validation_study(ValidationKind::SuccessVsR, cfg, {SweepParam::RadiusR, o.r_values}, opts);
    } else {
      ScenarioConfig c = cfg;
      c.radius_rule = *rule;
      if (name == "design") table = run_design_insight_study(c, o.c_values, o.design_v_values);
      if (name == "delay") table = run_delay_study(c, o.d0_values, o.sim_c_values, opts);
      if (name == "ase") table = run_ase_study(c, o.d0_values, o.sim_c_values, opts);
    }
    Sink sink(g.out_dir, name + ".csv", out);
    write_metric_csv(*sink, table, header || !g.out_dir.empty());
    header = false;
  }
  return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"UAV swarm multicast: distance laws, closed-form metrics and protocol simulation", "clustercast"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--out-dir", g.out_dir, "write result files here instead of stdout");
  app.add_option("--set", g.assignments, "override any key: --set radio.p_bs_mw=2000");

  std::map<std::string, std::string> per_key_values;
  for (const std::string& key : config_keys()) app.add_option("--" + key, per_key_values[key]);

  struct Alias {
    const char* flag;
    const char* key;
    const char* help;
  };
  static constexpr Alias kAliases[] = {
      {"--seed", "run.base_seed", "base seed of all randomness"},
      {"--replications", "run.replications", "epochs per grid point"},
      {"--d0", "geometry.d0_m", "BS to network-center distance [m]"},
      {"--num-clusters", "geometry.num_clusters", "number of clusters C"},
      {"--total-uavs", "geometry.total_uavs", "UAVs in the swarm"},
      {"--r,--radius-r", "geometry.radius_r_m", "cluster radius [m]"},
      {"--v-norm", "geometry.v_norm_m", "BS to cluster-center distance [m]"},
      {"--lambda", "geometry.lambda_per_m2", "cluster-center density [1/m^2]"},
      {"--lambda-off", "geometry.lambda_off_per_m2", "UAV density inside a cluster [1/m^2]"},
      {"--mode", "geometry.mode", "fixed_total or density"},
      {"--max-time", "protocol.max_time_ms", "epoch time limit [ms]"},
  };
  std::vector<std::pair<std::string, CLI::Option*>> alias_options;
  std::vector<std::string> alias_values(std::size(kAliases));
  for (std::size_t i = 0; i < std::size(kAliases); ++i) {
    alias_options.emplace_back(kAliases[i].key, app.add_option(kAliases[i].flag, alias_values[i], kAliases[i].help));
  }

  auto* topology = app.add_subcommand("topology", "sample topology drops");
  int drops = 1;
  topology->add_option("--drops", drops, "number of drops")->check(CLI::PositiveNumber);

  auto* distributions = app.add_subcommand("distributions", "pdf/cdf grid of a distance law and a KS check");
  DistributionsOptions dist_opts;
  distributions->add_option("--kind", dist_opts.kind, "d1hat, d1, d2 or a");
  distributions->add_option("--a", dist_opts.a, "offset of the typical UAV for d2 [m]");
  distributions->add_option("--samples", dist_opts.samples, "geometric samples for the KS check");

  auto* metrics = app.add_subcommand("metrics", "closed-form P_cov, P_suc, P_req, delay and ASE");

  auto* simulate = app.add_subcommand("simulate", "one protocol epoch over one topology");
  SimulateOptions sim_opts;
  simulate->add_option("--scheme", sim_opts.scheme, "clustering, benchmark or rnc");
  simulate->add_option("--event-log", sim_opts.event_log, "write the event log CSV here");

  auto* study = app.add_subcommand("study", "parameter sweeps");
  StudyCliOptions study_opts;
  study->add_option("--name", study_opts.name, "coverage, success, design, delay, ase or all");
  study->add_option("--mc-trials", study_opts.mc_trials, "Monte Carlo trials per validation point");
  study->add_flag("--serial", study_opts.serial, "use the serial kernels");
  study->add_option("--radius-rule", study_opts.radius_rule, "radius rule of the C sweeps");
  study->add_option("--v-values", study_opts.v_values, "v_norm grid of the coverage study");
  study->add_option("--r-values", study_opts.r_values, "radius grid of the success study");
  study->add_option("--c-values", study_opts.c_values, "C grid of the design study");
  study->add_option("--design-v-values", study_opts.design_v_values, "v_norm grid of the design study");
  study->add_option("--d0-values", study_opts.d0_values, "D0 grid of the delay and ASE studies");
  study->add_option("--sim-c-values", study_opts.sim_c_values, "C grid of the delay and ASE studies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "config", "args", e.what());
    return kExitConfig;
  }

  try {
    for (const std::string& key : config_keys()) {
      if (app.count("--" + key) > 0) g.per_key[key] = per_key_values[key];
    }
    for (std::size_t i = 0; i < alias_options.size(); ++i) {
      if (alias_options[i].second->count() > 0) g.aliases.emplace_back(alias_values[i], alias_options[i].first);
    }
    const ScenarioConfig cfg = effective_config(g);
    validate(cfg);
    if (!g.out_dir.empty()) {
      std::filesystem::create_directories(g.out_dir);
      std::ofstream(std::filesystem::path(g.out_dir) / "effective_config.txt") << serialize_config(cfg);
    }
    if (topology->parsed()) return cmd_topology(cfg, g, drops, out);
    if (distributions->parsed()) return cmd_distributions(cfg, g, dist_opts, out, err);
    if (metrics->parsed()) return cmd_metrics(cfg, g, out);
    if (simulate->parsed()) return cmd_simulate(cfg, g, sim_opts, out, err);
    if (study->parsed()) return cmd_study(cfg, g, study_opts, out);
    return kExitConfig;
  } catch (const ConfigError& e) {
    report(err, "config", e.field(), e.what());
    return kExitConfig;
  } catch (const ParameterError& e) {
    report(err, "config", e.field(), e.what());
    return kExitConfig;
  } catch (const NumericError& e) {
    report(err, "numeric", "", e.what());
    return kExitNumeric;
  } catch (const IntegrityError& e) {
    report(err, "integrity", "", e.what());
    return kExitIntegrity;
  } catch (const std::exception& e) {
    report(err, "internal", "", e.what());
    return kExitFailure;
  }
}

} // namespace clustercast
