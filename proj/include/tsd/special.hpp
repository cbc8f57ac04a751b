#pragma once

#include <complex>

namespace tsd {

using complex = std::complex<double>;

/// Gamma function, valid for negative non-integer arguments.
double gamma_fn(double x);

/// Upper incomplete gamma Γ(a, x) for a > 0, x >= 0.
double upper_gamma(double a, double x);

/// Lower incomplete gamma γ(a, x) for a > 0, x >= 0.
double lower_gamma(double a, double x);

/// e^w - 1 without cancellation for small |w|.
complex expm1(complex w);

/// (e^{a w} - 1) / a, continuous at a = 0 where it equals w.
complex expm1_over(double a, complex w);

}  // namespace tsd
