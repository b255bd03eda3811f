#include "opshare/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace opshare {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult r;
  r.value = gauss_kronrod<double, 15>::integrate(f, a, b, opts.max_depth, opts.tolerance, &r.error_estimate);
  return r;
}

double decay_point(const std::function<double(double)>& g, double threshold) {
  if (g(0.0) < threshold) return 0.0;
  double hi = 1.0;
  while (!(g(hi) < threshold)) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("integrand does not decay below the cutoff");
  }
  double lo = hi / 2.0;
  if (hi == 1.0) lo = 0.0;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < threshold ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace opshare
