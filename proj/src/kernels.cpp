#include "clustercast/kernels.hpp"

#include "clustercast/errors.hpp"
#include "clustercast/geometry.hpp"

#include <algorithm>

#ifdef CLUSTERCAST_HAVE_OPENMP
#include <omp.h>
#endif

namespace clustercast::kernels {

int max_threads() noexcept {
#ifdef CLUSTERCAST_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

std::int64_t chunk_count(std::int64_t n) { return (n + kChunkSize - 1) / kChunkSize; }

std::int64_t chunk_length(std::int64_t n, std::int64_t chunk) {
  return std::min(kChunkSize, n - chunk * kChunkSize);
}

bool coverage_trial(const ClusterGeometry& geom, const RadioParams& radio, Rng& rng) {
  const Vec2 w = sample_uniform_disk(geom.radius_r, rng);
  const double dx = geom.v_norm + w.x;
  const double dh = geom.height_gap();
  const double d1 = std::sqrt(dx * dx + w.y * w.y + dh * dh);
  return reception_success(radio.p_bs_mw, d1, LinkKind::BsToUav, radio, rng);
}

bool link_trial(double radius_r, const RadioParams& radio, Rng& rng) {
  const Vec2 a = sample_uniform_disk(radius_r, rng);
  const Vec2 b = sample_uniform_disk(radius_r, rng);
  return reception_success(radio.p_uav_mw, (a - b).norm(), LinkKind::UavToUav, radio, rng);
}

double distance_draw(const DistanceQuery& q, Rng& rng) {
  const Vec2 w = sample_uniform_disk(q.geom.radius_r, rng);
  switch (q.kind) {
  case DistanceKind::D1Hat: return Vec2{q.geom.v_norm + w.x, w.y}.norm();
  case DistanceKind::D1: {
    const double planar = Vec2{q.geom.v_norm + w.x, w.y}.norm();
    const double dh = q.geom.height_gap();
    return std::sqrt(planar * planar + dh * dh);
  }
  case DistanceKind::D2: return (w - Vec2{q.a, 0.0}).norm();
  case DistanceKind::A: return w.norm();
  }
  return 0.0;
}

template <class Trial>
std::int64_t chunk_successes(std::int64_t trials, std::uint64_t seed, std::int64_t chunk, Trial& trial) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(chunk));
  std::int64_t hits = 0;
  const std::int64_t len = chunk_length(trials, chunk);
  for (std::int64_t i = 0; i < len; ++i) hits += trial(rng) ? 1 : 0;
  return hits;
}

template <class Trial>
BernoulliTally tally_serial(std::int64_t trials, std::uint64_t seed, Trial trial) {
  if (trials < 0) throw ParameterError("trials", "must be >= 0");
  BernoulliTally t{0, trials};
  for (std::int64_t c = 0; c < chunk_count(trials); ++c) t.successes += chunk_successes(trials, seed, c, trial);
  return t;
}

template <class Trial>
BernoulliTally tally_parallel(std::int64_t trials, std::uint64_t seed, Trial trial) {
  if (trials < 0) throw ParameterError("trials", "must be >= 0");
  const std::int64_t chunks = chunk_count(trials);
  std::int64_t hits = 0;
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : hits)
  for (std::int64_t c = 0; c < chunks; ++c) hits += chunk_successes(trials, seed, c, trial);
  return {hits, trials};
}

void fill_chunk(const DistanceQuery& q, std::vector<double>& out, std::uint64_t seed, std::int64_t chunk) {
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(chunk));
  const auto n = static_cast<std::int64_t>(out.size());
  const std::int64_t begin = chunk * kChunkSize;
  const std::int64_t len = chunk_length(n, chunk);
  for (std::int64_t i = 0; i < len; ++i) out[static_cast<std::size_t>(begin + i)] = distance_draw(q, rng);
}

} // namespace

namespace serial {

BernoulliTally coverage_trials(const ClusterGeometry& geom, const RadioParams& radio, std::int64_t trials,
                               std::uint64_t seed) {
  return tally_serial(trials, seed, [&](Rng& rng) { return coverage_trial(geom, radio, rng); });
}

BernoulliTally link_success_trials(double radius_r, const RadioParams& radio, std::int64_t trials,
                                   std::uint64_t seed) {
  return tally_serial(trials, seed, [&](Rng& rng) { return link_trial(radius_r, radio, rng); });
}

std::vector<double> distance_samples(const DistanceQuery& query, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  const std::int64_t chunks = chunk_count(static_cast<std::int64_t>(n));
  for (std::int64_t c = 0; c < chunks; ++c) fill_chunk(query, out, seed, c);
  return out;
}

} // namespace serial

namespace parallel {

BernoulliTally coverage_trials(const ClusterGeometry& geom, const RadioParams& radio, std::int64_t trials,
                               std::uint64_t seed) {
  return tally_parallel(trials, seed, [&](Rng& rng) { return coverage_trial(geom, radio, rng); });
}

BernoulliTally link_success_trials(double radius_r, const RadioParams& radio, std::int64_t trials,
                                   std::uint64_t seed) {
  return tally_parallel(trials, seed, [&](Rng& rng) { return link_trial(radius_r, radio, rng); });
}

std::vector<double> distance_samples(const DistanceQuery& query, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n);
  const std::int64_t chunks = chunk_count(static_cast<std::int64_t>(n));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) fill_chunk(query, out, seed, c);
  return out;
}

} // namespace parallel

} // namespace clustercast::kernels
