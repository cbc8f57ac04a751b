#pragma once

#include <functional>
#include <vector>

namespace tsd {

using RealFn = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

/// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
/// Throws NumericalError when the estimate misses max(abs_tol, rel_tol*L1).
QuadResult integrate(const RealFn& f, double a, double b, double rel_tol = 1e-11,
                     double abs_tol = 0.0, unsigned max_depth = 22);

struct UncheckedResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // ∫|f| estimate
};

/// integrate() without the convergence check: returns whatever the rule reached.
UncheckedResult integrate_unchecked(const RealFn& f, double a, double b, double rel_tol = 1e-11,
                                    double abs_tol = 0.0, unsigned max_depth = 22);

/// Same as integrate() but pre-splits [a, b] into `pieces` equal panels.
/// Use for long ranges with oscillatory integrands.
QuadResult integrate_panels(const RealFn& f, double a, double b, int pieces,
                            double rel_tol = 1e-11, double abs_tol = 0.0, unsigned max_depth = 22);

/// ∫_0^upper g(u) m u^{-1-alpha} e^{-lambda u} du, for g(u) = O(u) at the origin.
///
/// The piece near zero is mapped through u = c t^{1/(1-alpha)}, which turns the
/// u^{-alpha} endpoint behaviour into a bounded integrand. The rest is cut where
/// e^{-lambda u} u^{growth} is below 1e-17 relative to its peak. `frequency` is the
/// oscillation rate of g (0 if g does not oscillate) and only controls panelling.
/// `abs_tol` lets integrals that are negligible in absolute terms stop early.
QuadResult integrate_levy_tail(const RealFn& g, double m, double alpha, double lambda,
                               double upper, double rel_tol = 1e-11, double growth = 4.0,
                               double frequency = 0.0, double abs_tol = 0.0);

enum class FourierKind { sine, cosine };

/// ∫_0^∞ f(t) sin(ωt) dt (or cos) by the Ooura-Mori double-exponential rule, refined
/// level by level from the coarsest until two successive levels agree to `rel_tol`.
/// Node tables are shared and immutable, and every call starts from the same level,
/// so the result depends on the arguments only. The error is the last level
/// difference; when the finest level is reached without agreement the estimate is
/// returned as is and the caller decides.
QuadResult integrate_fourier(const RealFn& f, double omega, FourierKind kind, double rel_tol);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre_64();
const GaussRule& gauss_legendre_32();

}  // namespace tsd
