#pragma once

#include <functional>
#include <initializer_list>
#include <span>

namespace clustercast {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of f over [lo, hi], split at every
/// breakpoint strictly inside the interval. Throws NumericError when the
/// summed error estimate exceeds abs_tol.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double abs_tol, std::span<const double> breakpoints = {});

inline QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                                  double abs_tol, std::initializer_list<double> breakpoints) {
  return integrate(f, lo, hi, abs_tol, std::span<const double>(breakpoints.begin(), breakpoints.size()));
}

} // namespace clustercast
