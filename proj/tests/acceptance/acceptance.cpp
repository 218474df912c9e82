// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include "clustercast/analysis.hpp"
#include "clustercast/distributions.hpp"
#include "clustercast/experiments.hpp"
#include "clustercast/geometry.hpp"
#include "clustercast/kernels.hpp"
#include "clustercast/protocol.hpp"
#include "clustercast/scenario.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace clustercast;

namespace {

constexpr double kKsGapLimit = 0.01;
constexpr double kMassTolerance = 1e-6;
constexpr double kContinuityTolerance = 1e-9;
constexpr double kSigmaBand = 4.0;
constexpr std::int64_t kMetricTrials = 1000000;
constexpr std::size_t kDistanceSamples = 100000;
constexpr int kDelayEpochs = 2000;
constexpr double kNearBsBand = 0.15;
constexpr double kClusterSpreadBand = 0.10;

int failures = 0;

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string csv(const MetricTable& t) {
  std::ostringstream out;
  write_metric_csv(out, t);
  return out.str();
}

ScenarioConfig sweep_config() {
  ScenarioConfig cfg;
  cfg.radius_rule = RadiusRule::DensityPreserving;
  cfg.total_uavs = 50;
  cfg.replications = kDelayEpochs;
  return cfg;
}

double row_mean(const MetricTable& t, const std::string& param, double x, const char* scheme, const char* metric) {
  const auto row = t.find(param, x, scheme, metric);
  return row ? row->mean : std::nan("");
}

void distance_laws() {
  Stopwatch sw;
  double worst = 0.0;
  std::string where;
  for (double v : {400.0, 800.0, 1200.0}) {
    const double gap = empirical_distance_check({DistanceKind::D1, {v, 50.0, 10.0, 20.0}, 0.0}, kDistanceSamples, 1);
    if (gap > worst) worst = gap, where = fmt("d1 at v=%g", v);
  }
  for (double a : {10.0, 25.0, 45.0}) {
    const double gap = empirical_distance_check({DistanceKind::D2, {800.0, 50.0, 10.0, 20.0}, a}, kDistanceSamples, 2);
    if (gap > worst) worst = gap, where = fmt("d2 at a=%g", a);
  }
  const double t = sw.seconds();
  verdict(1, worst < kKsGapLimit && t < 30.0, "distance laws vs 1e5 geometric samples",
          fmt("max sup-norm CDF gap %.4f (%s) < %.2f; %.1f s < 30 s", worst, where.c_str(), kKsGapLimit, t));
}

double independent_mass(const std::function<double(double)>& pdf, double lo, double hi,
                        std::initializer_list<double> cuts = {}) {
  boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> pts{lo};
  for (double c : cuts) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += ts.integrate(pdf, pts[i], pts[i + 1]);
  return sum;
}

void normalization() {
  Rng rng = make_rng(2718, 0);
  double worst = 0.0;
  double worst_jump = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = 5.0 + 150.0 * uniform01(rng);
    const double v = r * (1.05 + 30.0 * uniform01(rng));
    const double a = r * (0.01 + 0.98 * uniform01(rng));
    const ClusterGeometry g{v, r, 30.0 * uniform01(rng), 30.0 * uniform01(rng)};
    const Support s1 = d1_support(g);
    worst = std::max(worst, std::abs(independent_mass([&](double d) { return pdf_d1(d, g); }, s1.lo, s1.hi) - 1.0));
    worst = std::max(worst, std::abs(independent_mass([&](double d) { return pdf_d2(d, a, r); }, 0.0, r + a, {r - a}) - 1.0));
    worst = std::max(worst, std::abs(independent_mass([&](double x) { return pdf_a(x, r); }, 0.0, r) - 1.0));
    const double j = r - a;
    // The outer branch behaves like f0 + c1*sqrt(h) + c2*h past r-a, so its
    // right limit is extrapolated in sqrt(h) through h, 4h and 16h.
    const double h = 1e-8 * r;
    const double right = (8.0 * pdf_d2(j + h, a, r) - 6.0 * pdf_d2(j + 4 * h, a, r) + pdf_d2(j + 16 * h, a, r)) / 3.0;
    worst_jump = std::max(worst_jump, std::abs(pdf_d2(j, a, r) - right));
  }
  verdict(2, worst < kMassTolerance && worst_jump < kContinuityTolerance, "pdf normalization and d2 continuity",
          fmt("max |mass-1| %.2e < %.0e over 3x20 draws; max jump at r-a %.2e < %.0e", worst, kMassTolerance,
              worst_jump, kContinuityTolerance));
}

void metric_equivalence() {
  Stopwatch sw;
  const RadioParams radio;
  double worst = 0.0;
  std::string where;
  for (double v : {400.0, 800.0, 1200.0}) {
    const ClusterGeometry g{v, 50.0, 10.0, 20.0};
    const auto mc = kernels::coverage_trials(ExecutionPolicy::Parallel, g, radio, kMetricTrials, 31);
    const double z = std::abs(mc.mean() - coverage_probability(g, radio)) / mc.std_error();
    if (z > worst) worst = z, where = fmt("P_cov at v=%g", v);
  }
  for (double r : {25.0, 50.0, 100.0}) {
    const auto mc = kernels::link_success_trials(ExecutionPolicy::Parallel, r, radio, kMetricTrials, 32);
    const double z = std::abs(mc.mean() - transmission_success_probability(r, radio)) / mc.std_error();
    if (z > worst) worst = z, where = fmt("P_suc at r=%g", r);
  }
  const double t = sw.seconds();
  verdict(3, worst < kSigmaBand && t < 120.0, "quadrature vs Monte Carlo metrics at 1e6 trials",
          fmt("max |quad-MC|/SE %.2f (%s) < %.0f; %.1f s < 120 s", worst, where.c_str(), kSigmaBand, t));
}

void request_arithmetic() {
  const int peers = peer_count(1e-3, 50.0);
  bool exact = true;
  for (double p_suc : {0.0, 0.3, 0.91, 0.98, 1.0}) {
    exact = exact && request_success_probability(1.0, p_suc, 1e-3, 50.0) == p_suc;
  }
  verdict(4, peers == 7 && exact, "request success arithmetic",
          fmt("floor(1e-3*pi*50^2) = %d (want 7); p_cov=1 gives p_req == p_suc exactly: %s", peers,
              exact ? "yes" : "no"));
}

void delay_degenerate() {
  const double a = average_delay(1.0, 0.7, 10.0, 1.0);
  const double b = average_delay(0.0, 1.0, 10.0, 1.0);
  verdict(5, a == 10.0 && b == 21.0, "delay formula degenerate cases",
          fmt("p_cov=1 -> %.17g (want 10); p_cov=0,p_suc=1 -> %.17g (want 21)", a, b));
}

void design_insight(MetricTable& table) {
  const std::vector<int> cs{2, 4, 6, 8, 10};
  table = run_design_insight_study(sweep_config(), cs, {400.0, 1200.0});
  bool pass = true;
  std::string detail;
  for (double v : {400.0, 1200.0}) {
    const std::string param = fmt("num_clusters@v_norm=%g", v);
    std::vector<double> p;
    for (int c : cs) p.push_back(row_mean(table, param, c, "theory", "p_req"));
    const bool up = std::is_sorted(p.begin(), p.end());
    const bool down = std::is_sorted(p.rbegin(), p.rend());
    const bool ok = v < 800.0 ? up : down;
    pass = pass && ok;
    detail += fmt("v=%g %s P_req[C=2..10]=", v, v < 800.0 ? "nondecreasing" : "nonincreasing");
    for (double x : p) detail += fmt("%.4f ", x);
    detail += ok ? "(ok); " : "(violated); ";
  }
  verdict(6, pass, "request success vs cluster count", detail);
}

void delay_ordering(MetricTable& table) {
  const std::vector<int> cs{2, 5, 10};
  std::string detail;
  bool pass = true;
  for (double d0 : {400.0, 800.0, 1200.0}) {
    Stopwatch sw;
    const MetricTable t = run_delay_study(sweep_config(), {d0}, cs);
    table.append(t);
    const double secs = sw.seconds();
    const std::string param = fmt("num_clusters@d0=%g", d0);
    double lo = 1e300, hi = 0.0;
    bool ok = secs < 300.0;
    detail += fmt("D0=%g:", d0);
    for (int c : cs) {
      const double cl = row_mean(t, param, c, "clustering", "delay_ms");
      const double bm = row_mean(t, param, c, "benchmark", "delay_ms");
      const double rn = row_mean(t, param, c, "rnc", "delay_ms");
      lo = std::min(lo, cl);
      hi = std::max(hi, cl);
      if (d0 < 600.0) {
        ok = ok && std::abs(cl - rn) / rn < kNearBsBand;
      } else {
        ok = ok && cl < bm && cl < rn;
      }
      detail += fmt(" C=%d cl/bm/rnc %.3f/%.3f/%.3f", c, cl, bm, rn);
    }
    const double spread = (hi - lo) / lo;
    ok = ok && spread < kClusterSpreadBand;
    detail += fmt(" spread %.1f%% (%.0f s) %s; ", 100.0 * spread, secs, ok ? "ok" : "violated");
    pass = pass && ok;
  }
  verdict(7, pass, "multicast delay ordering (2e3 epochs, 50 UAVs)", detail);
}

void ase_ordering(MetricTable& table) {
  const std::vector<int> cs{2, 5, 10};
  const std::vector<double> d0s{400.0, 800.0, 1200.0};
  table = run_ase_study(sweep_config(), d0s, cs);
  bool ge = true, same = true;
  double min_margin = 1e300;
  for (double d0 : d0s) {
    for (int c : cs) {
      const std::string param = fmt("num_clusters@d0=%g", d0);
      const double cl = row_mean(table, param, c, "clustering", "ase");
      const double bm = row_mean(table, param, c, "benchmark", "ase");
      const double rn = row_mean(table, param, c, "rnc", "ase");
      ge = ge && cl >= bm;
      same = same && bm == rn;
      min_margin = std::min(min_margin, cl - bm);
    }
  }
  verdict(8, ge && same, "area spectral efficiency ordering",
          fmt("clustering >= benchmark at all 9 points: %s (min margin %.3e); benchmark == rnc: %s", ge ? "yes" : "no",
              min_margin, same ? "yes" : "no"));
}

Topology four_uav_cluster() {
  Topology t;
  t.bs_position = {{0.0, 0.0}, 10.0};
  t.region_center = {800.0, 0.0};
  t.region_radius = 100.0;
  Cluster c;
  c.center = {{800.0, 0.0}, 20.0};
  c.radius_r = 5.0;
  for (int i = 0; i < 4; ++i) c.members.push_back({{800.0 + i, 0.0}, 20.0});
  t.clusters.push_back(c);
  return t;
}

void protocol_invariants() {
  ScenarioConfig cfg;
  cfg.d0_m = 1200.0;
  const SimParams sim = sim_params_from(cfg);
  std::int64_t duplicates = 0, held_requests = 0, conservation = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    Rng rng = make_rng(s, 0);
    const Topology t = build_topology(cfg, rng);
    const SchemeOutcome o = run_clustering_scheme(t, cfg.radio, sim, s);
    duplicates += o.duplicate_replies;
    held_requests += o.requests_for_held_packet;
    conservation += o.delivered_count() + o.undelivered_count() == static_cast<int>(t.uav_count()) ? 0 : 1;
  }

  const Topology t = four_uav_cluster();
  SimParams scripted;
  scripted.broadcast_override = std::vector<bool>{true, true, false, false};
  scripted.perfect_peer_links = true;
  scripted.record_events = true;
  std::optional<SchemeOutcome> fig;
  for (std::uint64_t s = 0; s < 1000 && !fig; ++s) {
    SchemeOutcome o = run_clustering_scheme(t, cfg.radio, scripted, s);
    const auto first = std::find_if(o.events.begin(), o.events.end(),
                                    [](const EventRecord& e) { return e.kind == EventKind::RequestTxEnd; });
    if (o.collisions == 0 && first != o.events.end() && first->actor == 2) fig = std::move(o);
  }
  const bool scripted_ok = fig && fig->requests == 1 && fig->replies == 1 && fig->uavs[3].requests_sent == 0 &&
                           fig->delivered_count() == 4;
  verdict(9, duplicates == 0 && held_requests == 0 && conservation == 0 && scripted_ok,
          "protocol invariants over 1e3 epochs",
          fmt("duplicate replies %lld, requests for held packets %lld, conservation breaks %lld; scripted 4-UAV "
              "case: %s",
              static_cast<long long>(duplicates), static_cast<long long>(held_requests),
              static_cast<long long>(conservation),
              fig ? fmt("%lld request, %lld reply, 4th UAV requests %d", static_cast<long long>(fig->requests),
                        static_cast<long long>(fig->replies), fig->uavs[3].requests_sent)
                        .c_str()
                  : "no seed found"));
}

void determinism(const MetricTable& design, const MetricTable& delay, const MetricTable& ase) {
  const ScenarioConfig cfg = sweep_config();
  StudyOptions opts;
  opts.mc_trials = 100000;
  int identical = 0, total = 0;
  const auto same = [&](const std::string& a, const std::string& b) {
    ++total;
    identical += a == b ? 1 : 0;
  };
  const SweepSpec vs{SweepParam::VNorm, {200, 400, 600, 800, 1000, 1200}};
  const SweepSpec rs{SweepParam::RadiusR, {10, 25, 50, 75, 100}};
  same(csv(run_validation_study(ValidationKind::CoverageVsV, cfg, vs, opts)),
       csv(run_validation_study(ValidationKind::CoverageVsV, cfg, vs, opts)));
  same(csv(run_validation_study(ValidationKind::SuccessVsR, cfg, rs, opts)),
       csv(run_validation_study(ValidationKind::SuccessVsR, cfg, rs, opts)));
  same(csv(design), csv(run_design_insight_study(cfg, {2, 4, 6, 8, 10}, {400.0, 1200.0})));
  MetricTable delay_again;
  for (double d0 : {400.0, 800.0, 1200.0}) delay_again.append(run_delay_study(cfg, {d0}, {2, 5, 10}));
  same(csv(delay), csv(delay_again));
  same(csv(ase), csv(run_ase_study(cfg, {400.0, 800.0, 1200.0}, {2, 5, 10})));
  verdict(10, identical == total, "study reruns with the same base seed",
          fmt("%d of %d study CSVs byte-identical", identical, total));
}

} // namespace

int main() {
  std::printf("parallel kernels use %d thread(s)\n", kernels::max_threads());
  distance_laws();
  normalization();
  metric_equivalence();
  request_arithmetic();
  delay_degenerate();
  MetricTable design, delay, ase;
  design_insight(design);
  delay_ordering(delay);
  ase_ordering(ase);
  protocol_invariants();
  determinism(design, delay, ase);
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
