#include "tsd/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace tsd {

double gamma_fn(double x) { return boost::math::tgamma(x); }

double upper_gamma(double a, double x) {
  if (x == 0.0) return boost::math::tgamma(a);
  return boost::math::tgamma(a, x);
}

double lower_gamma(double a, double x) {
  if (x == 0.0) return 0.0;
  return boost::math::tgamma_lower(a, x);
}

complex expm1(complex w) {
  const double re = w.real();
  const double im = w.imag();
  const double half = std::sin(0.5 * im);
  // cos(b) - 1 = -2 sin^2(b/2)
  return {std::expm1(re) * std::cos(im) - 2.0 * half * half, std::exp(re) * std::sin(im)};
}

complex expm1_over(double a, complex w) {
  if (a == 0.0) return w;
  return expm1(a * w) / a;
}

}  // namespace tsd
