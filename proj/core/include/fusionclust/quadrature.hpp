#pragma once

#include <functional>
#include <span>

namespace fusionclust {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod integration of `f` over (a, b); either bound may
/// be infinite. `breakpoints` inside (a, b) split the range at kinks.
/// Throws ConvergenceError when the error estimate stays above `abs_tol`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-10, std::span<const double> breakpoints = {});

}  // namespace fusionclust
