#include "fusionclust/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

constexpr unsigned kMaxDepth = 30;
constexpr double kMinRelativeTolerance = 1e-13;

QuadratureResult integrate_piece(const std::function<double(double)>& f, double a, double b,
                                 double tolerance) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult piece;
  double l1 = 0.0;
  piece.value = gauss_kronrod<double, 61>::integrate(f, a, b, kMaxDepth, tolerance,
                                                     &piece.error_estimate, &l1);
  return piece;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, std::span<const double> breakpoints) {
  if (a == b) return {};
  const double sign = a < b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);

  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  const double tolerance = std::max(kMinRelativeTolerance, 0.1 * abs_tol);
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] == cuts[i + 1]) continue;
    const QuadratureResult piece = integrate_piece(f, cuts[i], cuts[i + 1], tolerance);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
  }
  // Allow the reported estimate some slack: Gauss-Kronrod estimates are
  // pessimistic once the integrand is resolved to round-off.
  if (!std::isfinite(total.value) || total.error_estimate > 1e3 * abs_tol) {
    throw ConvergenceError("quadrature did not reach the requested tolerance", a, b);
  }
  total.value *= sign;
  return total;
}

}  // namespace fusionclust
