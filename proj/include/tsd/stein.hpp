#pragma once

#include "tsd/inversion.hpp"
#include "tsd/model.hpp"
#include "tsd/quadrature.hpp"
#include "tsd/test_function.hpp"

#include <memory>
#include <vector>

namespace tsd {

/// A f(x) = -x f(x) + ∫ u f(x+u) ν(du) for bounded f. The error is the quadrature
/// estimate of the integral term.
QuadResult stein_apply(const TsdParams& params, const RealFn& f, double x, double rel_tol = 1e-9);

/// ∫ u f(x+u) ν(du) alone.
QuadResult levy_integral_term(const TsdParams& params, const RealFn& f, double x,
                              double rel_tol = 1e-9, double abs_tol = 0.0);

/// E[X f(X)] - E[∫ u f(X+u) ν(du)] with X ~ TSD(law) and ν the Lévy measure of
/// `measure`. Expectations are taken against the inverted CDF of X. Zero (up to
/// quadrature error) exactly when law == measure.
double stein_identity_residual(const TsdParams& law, const TsdParams& measure, const TestFunction& f);
double stein_identity_residual(const TsdParams& params, const TestFunction& f);

enum class SemigroupRoute {
  automatic,  // spectral when h has a spectrum, otherwise law
  spectral,   // Parseval against φ_t
  law,        // quadrature against the inverted CDF of X_(t)
};

/// P_t h(x) = E h(x e^{-t} + X_(t)).
double semigroup_apply(const TsdParams& params, const TestFunction& h, double t, double x,
                       SemigroupRoute route = SemigroupRoute::automatic);

/// Same with an arbitrary function g (and g′) in place of h, always by the law route.
double semigroup_apply(const TsdParams& params, const RealFn& g, const RealFn& dg, double t, double x);

struct SteinOptions {
  /// |x| up to which evaluations use the precomputed frequency grid; 0 picks the
  /// effective support plus the reach of the Lévy integral in A.
  double reach = 0.0;
};

/// f_h(x) = -∫_0^1 E h′(xs + X_(-log s)) ds.
///
/// The s-integral uses 64-node Gauss-Legendre (32 nodes give the error estimate);
/// each inner expectation is a Parseval sum against φ(z)/φ(sz), so the s → 1 end,
/// where X_(t) collapses to a point, needs no inversion.
class SteinSolution {
 public:
  SteinSolution(const TsdParams& params, TestFunction h, SteinOptions options = {});

  double operator()(double x) const { return evaluate(x).value; }
  QuadResult evaluate(double x) const;
  /// f_h^{(r)}(x) for r ≤ 2 by Richardson-extrapolated central differences.
  double derivative(int r, double x, double step = 1e-3) const;

  const TsdParams& params() const { return params_; }
  const TestFunction& h() const { return h_; }
  double reach() const { return reach_; }

 private:
  struct Rule;
  double rule_value(const Rule& rule, double x) const;
  double slow_value(const std::vector<double>& nodes, const std::vector<double>& weights, double x) const;

  TsdParams params_;
  TestFunction h_;
  double reach_ = 0.0;
  double strip_ = 0.0;
  std::shared_ptr<const Rule> fine_;
  std::shared_ptr<const Rule> coarse_;
};

SteinSolution solve_stein(const TsdParams& params, const TestFunction& h, SteinOptions options = {});

struct DerivativeBoundReport {
  int order = 0;
  double observed_max = 0.0;
  double bound = 0.0;  // ‖h^{(r+1)}‖ / (r + 1)
  /// max |f_h′(x) - f_h′(y)| / |x - y| over grid pairs (order 1 only).
  double lipschitz_ratio = 0.0;
  double lipschitz_bound = 0.0;  // ‖h‴‖ / 3
  double slack = 1e-3;
  std::vector<double> grid;
  std::vector<double> values;
  bool passed = false;
};

/// Checks ‖f_h^{(r)}‖ ≤ ‖h^{(r+1)}‖/(r+1) on 64 points of the effective support, and
/// for r = 1 also the Lipschitz bound on f_h′.
DerivativeBoundReport verify_derivative_bounds(const TsdParams& params, const TestFunction& h, int r);
DerivativeBoundReport verify_derivative_bounds(const SteinSolution& solution, int r);

}  // namespace tsd
