#pragma once

// Monte Carlo kernels. Every kernel exists twice: a serial reference in
// `serial` and an OpenMP version in `parallel`. Both split the work into the
// same fixed-size chunks, seed chunk c with split_seed(seed, c) and reduce in
// chunk order, so their results are bit-identical for any thread count.

#include "clustercast/channel.hpp"
#include "clustercast/distributions.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace clustercast {

enum class ExecutionPolicy { Serial, Parallel };

namespace kernels {

inline constexpr std::int64_t kChunkSize = 8192;

struct BernoulliTally {
  std::int64_t successes = 0;
  std::int64_t trials = 0;

  double mean() const noexcept {
    return trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  }
  double std_error() const noexcept {
    if (trials < 2) return 0.0;
    const double p = mean();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  bool operator==(const BernoulliTally&) const = default;
};

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads() noexcept;

namespace serial {

/// UAV uniform in the cluster disk, fresh Rayleigh draw, BS downlink SNR > threshold.
BernoulliTally coverage_trials(const ClusterGeometry& geom, const RadioParams& radio, std::int64_t trials,
                               std::uint64_t seed);

/// Two independent uniform UAVs in one disk, fresh fading, UAV link SNR > threshold.
BernoulliTally link_success_trials(double radius_r, const RadioParams& radio, std::int64_t trials,
                                   std::uint64_t seed);

/// Distances drawn from the geometric construction (not from the closed-form law).
std::vector<double> distance_samples(const DistanceQuery& query, std::size_t n, std::uint64_t seed);

} // namespace serial

namespace parallel {

BernoulliTally coverage_trials(const ClusterGeometry& geom, const RadioParams& radio, std::int64_t trials,
                               std::uint64_t seed);
BernoulliTally link_success_trials(double radius_r, const RadioParams& radio, std::int64_t trials,
                                   std::uint64_t seed);
std::vector<double> distance_samples(const DistanceQuery& query, std::size_t n, std::uint64_t seed);

} // namespace parallel

inline BernoulliTally coverage_trials(ExecutionPolicy policy, const ClusterGeometry& geom,
                                      const RadioParams& radio, std::int64_t trials, std::uint64_t seed) {
  return policy == ExecutionPolicy::Serial ? serial::coverage_trials(geom, radio, trials, seed)
                                           : parallel::coverage_trials(geom, radio, trials, seed);
}

inline BernoulliTally link_success_trials(ExecutionPolicy policy, double radius_r, const RadioParams& radio,
                                          std::int64_t trials, std::uint64_t seed) {
  return policy == ExecutionPolicy::Serial ? serial::link_success_trials(radius_r, radio, trials, seed)
                                           : parallel::link_success_trials(radius_r, radio, trials, seed);
}

} // namespace kernels
} // namespace clustercast
