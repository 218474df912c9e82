#pragma once

#include <cstdint>
#include <random>

namespace clustercast {

using Rng = std::mt19937_64;

/// Derives an independent child seed from (base, stream) with the SplitMix64
/// finalizer, so replication i of a study always sees the same stream no
/// matter which thread runs it.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) {
  return Rng(split_seed(base, stream));
}

/// Uniform on [0, 1).
inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace clustercast
