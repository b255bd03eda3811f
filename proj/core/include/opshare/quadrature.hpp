#pragma once

#include <functional>

namespace opshare {

struct QuadratureOptions {
  /// Relative to the L1 norm of the integrand.
  double tolerance = 1e-12;
  unsigned max_depth = 20;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b]; b may be +infinity.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Smallest t >= 0 (to within 1e-9 relative) with g(t) < threshold, for g
/// nonincreasing in t.
double decay_point(const std::function<double(double)>& g, double threshold);

}  // namespace opshare
