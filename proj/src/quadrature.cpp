#include "clustercast/quadrature.hpp"

#include "clustercast/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace clustercast {

namespace {

constexpr unsigned kMaxDepth = 25;
constexpr double kRelativeTol = 1e-9;

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           double abs_tol, std::span<const double> breakpoints) {
  QuadratureResult total;
  if (!(hi > lo)) return total;

  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(hi);

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    double err = 0.0;
    const double piece = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, cuts[i], cuts[i + 1], kMaxDepth, kRelativeTol, &err);
    if (!std::isfinite(piece)) {
      std::ostringstream msg;
      msg << "quadrature produced a non-finite value on [" << cuts[i] << ", " << cuts[i + 1] << "]";
      throw NumericError(msg.str());
    }
    total.value += piece;
    total.error_estimate += err;
  }
  if (total.error_estimate > abs_tol) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << lo << ", " << hi << "]: error estimate "
        << total.error_estimate << " > tolerance " << abs_tol;
    throw NumericError(msg.str());
  }
  return total;
}

} // namespace clustercast
