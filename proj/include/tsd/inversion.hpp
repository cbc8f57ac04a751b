#pragma once

#include "tsd/charfn.hpp"
#include "tsd/quadrature.hpp"

#include <functional>
#include <vector>

namespace tsd {

struct InversionControls {
  /// Relative accuracy requested from the Fourier integrals.
  double rel_tol = 1e-10;
  /// Largest absolute error accepted on a CDF or density value.
  double abs_tol = 1e-8;
};

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

using ComplexFn = std::function<complex(double)>;

/// Gil-Pelaez CDF value of the (sub-)probability with characteristic function `cf`
/// and total mass `mass`; at an atom this is the midpoint of the jump.
QuadResult gil_pelaez_cdf(const ComplexFn& cf, double mass, double x, const InversionControls& ctrl);

/// (1/π) ∫_0^∞ Re[e^{-izx} cf(z)] dz.
QuadResult gil_pelaez_pdf(const ComplexFn& cf, double x, const InversionControls& ctrl);

double invert_cdf(const CharFn& cf, double x, const InversionControls& ctrl = {});

/// Density by inversion. Compound-Poisson laws carry an atom and are rejected.
double invert_pdf(const CharFn& cf, double x, const InversionControls& ctrl = {});

/// P(X > x), x > 0, and the density at x ≠ 0 of the stable law S(m1, m2, α), from
/// series in x^{-α} that converge for α < 1 (used by NumericLaw far from the centre,
/// where Fourier inversion loses accuracy).
double stable_upper_tail_series(const StableParams& params, double x);
double stable_density_series(const StableParams& params, double x);

/// A law known through its characteristic function, with declared atoms and an
/// effective support window. Immutable once built.
class NumericLaw {
 public:
  NumericLaw(CharFn cf, std::vector<Atom> atoms, double lo, double hi, double scale,
             InversionControls ctrl = {});

  /// Right-continuous CDF F(x).
  double cdf(double x) const;
  /// Left limit F(x-).
  double cdf_left(double x) const;
  /// Density of the continuous part.
  double pdf(double x) const;
  /// E g(X) = g(0) + ∫_0^∞ g'(1 - F) - ∫_{-∞}^0 g' F, by quadrature. The integrals
  /// stop where the Chernoff bound puts less than 1e-13 of ∫ P(|X| > x) dx beyond
  /// the cut, so g′ is assumed bounded.
  /// Throws NumericalError when the quadrature error estimate exceeds 1e-7 (1 + |E g|).
  double expect(const RealFn& g, const RealFn& dg) const;
  /// Same, returning the quadrature error estimate instead of checking it.
  QuadResult expectation(const RealFn& g, const RealFn& dg) const;

  /// Chernoff bounds min_θ E e^{θX} e^{-θx} on P(X ≥ x) and P(X ≤ x); 1 when the law
  /// has no exponential moments.
  double upper_tail_bound(double x) const;
  double lower_tail_bound(double x) const;
  /// Range used by expect(); infinite for laws without exponential moments.
  double reach_lo() const { return reach_lo_; }
  double reach_hi() const { return reach_hi_; }

  const CharFn& cf() const { return cf_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool has_atoms() const { return !atoms_.empty(); }
  double atom_mass() const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  /// Characteristic width used for grid construction.
  double scale() const { return scale_; }
  const InversionControls& controls() const { return ctrl_; }

 private:
  complex continuous_cf(double z) const;
  double continuous_cdf(double x) const;

  CharFn cf_;
  std::vector<Atom> atoms_;
  double lo_;
  double hi_;
  double scale_;
  InversionControls ctrl_;
  double reach_lo_;
  double reach_hi_;
};

/// Builds the law of a characteristic function: atoms from its kind, support from
/// mean ± 12 sd for light-tailed kinds and from tail quantiles for the stable kind.
NumericLaw make_law(const CharFn& cf, const InversionControls& ctrl = {});

/// Law of X_(t) with characteristic function φ_ts(z)/φ_ts(e^{-t} z).
NumericLaw law_of_Xt(const TsdParams& params, double t, const InversionControls& ctrl = {});

}  // namespace tsd
