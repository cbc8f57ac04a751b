#include "tsd/inversion.hpp"

#include "tsd/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsd {

namespace {

// Frequencies below this are treated as x = 0 (the law is continuous there or the
// caller handles the atom explicitly).
constexpr double kTinyX = 1e-12;

QuadResult half_line(const RealFn& f) {
  boost::math::quadrature::exp_sinh<double> rule;
  double error = 0.0;
  double l1 = 0.0;
  const double value = rule.integrate(f, 1e-12, &error, &l1);
  return {value, error};
}

void require(const QuadResult& r, const InversionControls& ctrl, const char* what, double x) {
  if (!std::isfinite(r.value) || r.error > ctrl.abs_tol) {
    std::ostringstream msg;
    msg << what << " inversion at x = " << x << " did not converge (error estimate " << r.error
        << ")";
    throw NumericalError(msg.str(), r.error);
  }
}

}  // namespace

QuadResult gil_pelaez_cdf(const ComplexFn& cf, double mass, double x, const InversionControls& ctrl) {
  if (mass == 0.0) return {0.0, 0.0};
  auto im_over_z = [&](double z) { return std::imag(cf(z)) / z; };
  if (std::abs(x) < kTinyX) {
    const auto tail = half_line(im_over_z);
    return {0.5 * mass - tail.value / M_PI, tail.error / M_PI};
  }
  auto re_over_z = [&](double z) { return std::real(cf(z)) / z; };
  // Im[e^{-izx} φ] = cos(xz) Im φ - sin(xz) Re φ
  const double w = std::abs(x);
  const double sign = x > 0.0 ? 1.0 : -1.0;
  const auto a = integrate_fourier(im_over_z, w, FourierKind::cosine, ctrl.rel_tol);
  const auto b = integrate_fourier(re_over_z, w, FourierKind::sine, ctrl.rel_tol);
  const double value = 0.5 * mass - (a.value - sign * b.value) / M_PI;
  return {value, (a.error + b.error) / M_PI};
}

QuadResult gil_pelaez_pdf(const ComplexFn& cf, double x, const InversionControls& ctrl) {
  auto re = [&](double z) { return std::real(cf(z)); };
  if (std::abs(x) < kTinyX) {
    const auto whole = half_line(re);
    return {whole.value / M_PI, whole.error / M_PI};
  }
  auto im = [&](double z) { return std::imag(cf(z)); };
  // Re[e^{-izx} φ] = cos(xz) Re φ + sin(xz) Im φ
  const double w = std::abs(x);
  const double sign = x > 0.0 ? 1.0 : -1.0;
  const auto a = integrate_fourier(re, w, FourierKind::cosine, ctrl.rel_tol);
  const auto b = integrate_fourier(im, w, FourierKind::sine, ctrl.rel_tol);
  return {(a.value + sign * b.value) / M_PI, (a.error + b.error) / M_PI};
}

double invert_cdf(const CharFn& cf, double x, const InversionControls& ctrl) {
  auto fn = [&cf](double z) { return cf(z); };
  const auto r = gil_pelaez_cdf(fn, 1.0, x, ctrl);
  require(r, ctrl, "CDF", x);
  return std::clamp(r.value, 0.0, 1.0);
}

double invert_pdf(const CharFn& cf, double x, const InversionControls& ctrl) {
  if (cf.kind() == CfKind::compound_poisson)
    throw std::domain_error("compound Poisson law has an atom at 0; density is not defined");
  auto fn = [&cf](double z) { return cf(z); };
  const auto r = gil_pelaez_pdf(fn, x, ctrl);
  require(r, ctrl, "density", x);
  return std::max(r.value, 0.0);
}

namespace {

// For x > 0, rotating the Fourier integral onto the negative imaginary axis gives
//   f(x) = (1/π) Σ_k Im[(-B)^k] Γ(kα+1)/k! x^{-kα-1},  B = -Γ(-α)(m₁e^{-iπα} + m₂),
// which converges for every x when α < 1; integrating termwise gives the tail.
template <bool Density>
double stable_series(const StableParams& p, double x) {
  if (!(x > 0.0)) throw std::domain_error("stable series needs x > 0");
  const double a = p.alpha();
  const complex b = -gamma_fn(-a) * (p.m1() * std::polar(1.0, -M_PI * a) + p.m2());
  const complex minus_b = -b;
  const double log_ratio = std::log(std::abs(minus_b)) - a * std::log(x);
  const double angle = std::arg(minus_b);
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 2000; ++k) {
    const double kk = static_cast<double>(k);
    const double log_mag = (Density ? std::lgamma(kk * a + 1.0) : std::lgamma(kk * a)) -
                           std::lgamma(kk + 1.0) + kk * log_ratio;
    const double mag = std::exp(log_mag);
    sum += mag * std::sin(kk * angle);
    if (mag < prev && mag <= 1e-17 * std::abs(sum)) break;
    prev = mag;
  }
  return Density ? sum / (M_PI * x) : sum / M_PI;
}

// Where the series terms shrink at least geometrically with ratio 1/2.
bool series_applies(const StableParams& p, double x) {
  const double a = p.alpha();
  const double b = std::abs(gamma_fn(-a) * (p.m1() * std::polar(1.0, -M_PI * a) + p.m2()));
  return std::abs(x) > 0.0 && b * std::pow(std::abs(x), -a) <= 0.5;
}

StableParams mirrored(const StableParams& p) { return {p.m2(), p.m1(), p.alpha()}; }

}  // namespace

double stable_upper_tail_series(const StableParams& params, double x) {
  return stable_series<false>(params, x);
}

double stable_density_series(const StableParams& params, double x) {
  return x > 0.0 ? stable_series<true>(params, x) : stable_series<true>(mirrored(params), -x);
}

NumericLaw::NumericLaw(CharFn cf, std::vector<Atom> atoms, double lo, double hi, double scale,
                       InversionControls ctrl)
    : cf_(std::move(cf)), atoms_(std::move(atoms)), lo_(lo), hi_(hi), scale_(scale), ctrl_(ctrl) {
  if (!(lo_ < hi_)) throw std::invalid_argument("law support must satisfy lo < hi");
  if (!(scale_ > 0.0)) throw std::invalid_argument("law scale must be positive");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.mass >= 0.0)) throw std::invalid_argument("atom mass must be nonnegative");
    total += a.mass;
  }
  if (total > 1.0 + 1e-12) throw std::invalid_argument("atom masses exceed one");

  // Cut where the Chernoff bound leaves less than 1e-13 of ∫ P(X > x) dx outside.
  const double inf = std::numeric_limits<double>::infinity();
  const double eps = 1e-13;
  reach_hi_ = inf;
  reach_lo_ = -inf;
  for (int j = -8; j <= 8; ++j) {
    const double theta = std::ldexp(1.0, j) / scale_;
    const double up = cf_.log_mgf(theta);
    if (std::isfinite(up)) reach_hi_ = std::min(reach_hi_, (up - std::log(theta * eps)) / theta);
    const double down = cf_.log_mgf(-theta);
    if (std::isfinite(down)) reach_lo_ = std::max(reach_lo_, -(down - std::log(theta * eps)) / theta);
  }
  reach_hi_ = std::max(reach_hi_, hi_);
  reach_lo_ = std::min(reach_lo_, lo_);
}

double NumericLaw::upper_tail_bound(double x) const {
  double best = 1.0;
  for (int j = -8; j <= 8; ++j) {
    const double theta = std::ldexp(1.0, j) / scale_;
    const double k = cf_.log_mgf(theta);
    if (std::isfinite(k)) best = std::min(best, std::exp(k - theta * x));
  }
  return best;
}

double NumericLaw::lower_tail_bound(double x) const {
  double best = 1.0;
  for (int j = -8; j <= 8; ++j) {
    const double theta = std::ldexp(1.0, j) / scale_;
    const double k = cf_.log_mgf(-theta);
    if (std::isfinite(k)) best = std::min(best, std::exp(k + theta * x));
  }
  return best;
}

double NumericLaw::atom_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mass;
  return total;
}

complex NumericLaw::continuous_cf(double z) const {
  if (cf_.kind() == CfKind::compound_poisson && cf_.index() <= 700.0) {
    // φ_n - e^{-n} = e^{-n} (exp(n e^{ψ/n}) - 1), free of cancellation.
    const double n = cf_.index();
    const complex psi = cf_.tsd_exponent(z);
    return std::exp(-n) * expm1(n * std::exp(psi / n));
  }
  complex value = cf_(z);
  for (const auto& a : atoms_) value -= a.mass * std::polar(1.0, z * a.location);
  return value;
}

double NumericLaw::continuous_cdf(double x) const {
  const double mass = 1.0 - atom_mass();
  if (mass <= 1e-15) return 0.0;
  // Far outside the window the Chernoff bound already pins F within the tolerance.
  const double pinned = 1e-2 * ctrl_.abs_tol;
  if (x > hi_ && upper_tail_bound(x) <= pinned) return mass;
  if (x < lo_ && lower_tail_bound(x) <= pinned) return 0.0;
  if (const auto* sp = cf_.stable_params(); sp && series_applies(*sp, x)) {
    const double value = x > 0.0 ? 1.0 - stable_upper_tail_series(*sp, x)
                                  : stable_upper_tail_series(mirrored(*sp), -x);
    return std::clamp(value, 0.0, 1.0);
  }
  auto fn = [this](double z) { return continuous_cf(z); };
  const auto r = gil_pelaez_cdf(fn, mass, x, ctrl_);
  require(r, ctrl_, "CDF", x);
  return std::clamp(r.value, 0.0, mass);
}

double NumericLaw::cdf(double x) const {
  double value = continuous_cdf(x);
  for (const auto& a : atoms_)
    if (x >= a.location) value += a.mass;
  return std::clamp(value, 0.0, 1.0);
}

double NumericLaw::cdf_left(double x) const {
  double value = continuous_cdf(x);
  for (const auto& a : atoms_)
    if (x > a.location) value += a.mass;
  return std::clamp(value, 0.0, 1.0);
}

double NumericLaw::pdf(double x) const {
  if (1.0 - atom_mass() <= 1e-15) return 0.0;
  if (const auto* sp = cf_.stable_params(); sp && series_applies(*sp, x))
    return std::max(stable_density_series(*sp, x), 0.0);
  auto fn = [this](double z) { return continuous_cf(z); };
  const auto r = gil_pelaez_pdf(fn, x, ctrl_);
  require(r, ctrl_, "density", x);
  return std::max(r.value, 0.0);
}

QuadResult NumericLaw::expectation(const RealFn& g, const RealFn& dg) const {
  auto right = [&](double x) { return dg(x) * (1.0 - cdf(x)); };
  auto left = [&](double x) { return dg(x) * cdf(x); };
  const double tol = 1e-9;
  const double abs_tol = 1e-10;
  const unsigned depth = 12;
  // Panels about two scales wide keep the adaptive rule on the bulk; the inverted CDF
  // is only accurate to ~1e-11, so deep bisection would chase noise.
  auto panels = [&](const RealFn& f, double a, double b) {
    const int pieces = std::clamp(static_cast<int>(std::ceil((b - a) / (2.0 * scale_))), 1, 64);
    QuadResult total;
    const double width = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a + k * width;
      const double hi = k + 1 == pieces ? b : lo + width;
      const auto r = integrate_unchecked(f, lo, hi, tol, abs_tol / pieces, depth);
      total.value += r.value;
      total.error += r.error;
    }
    return total;
  };
  auto side = [&](const RealFn& f, double a, double b) {
    if (std::isfinite(a) && std::isfinite(b)) return panels(f, a, b);
    // No exponential moments: bulk on the window, the rest mapped to a finite range.
    const double edge = b > 0.0 ? std::max(hi_, scale_) : std::min(lo_, -scale_);
    QuadResult total = b > 0.0 ? panels(f, a, edge) : panels(f, edge, b);
    const auto far = b > 0.0 ? integrate_unchecked(f, edge, b, tol, abs_tol, depth)
                             : integrate_unchecked(f, a, edge, tol, abs_tol, depth);
    total.value += far.value;
    total.error += far.error;
    return total;
  };
  const auto up = side(right, 0.0, reach_hi_);
  const auto down = side(left, reach_lo_, 0.0);
  const double value = g(0.0) + up.value - down.value;
  if (!std::isfinite(value)) throw NumericalError("expectation is not finite", up.error + down.error);
  return {value, up.error + down.error};
}

double NumericLaw::expect(const RealFn& g, const RealFn& dg) const {
  const auto r = expectation(g, dg);
  if (r.error > 1e-7 * (1.0 + std::abs(r.value))) {
    std::ostringstream msg;
    msg << "expectation did not converge: error estimate " << r.error;
    throw NumericalError(msg.str(), r.error);
  }
  return r.value;
}

namespace {

struct Moments {
  double mean;
  double sd;
};

Moments light_tail_moments(const CharFn& cf) {
  switch (cf.kind()) {
    case CfKind::tempered: {
      const auto& p = *cf.tsd_params();
      return {cumulant_closed_form(p, 1), std::sqrt(cumulant_closed_form(p, 2))};
    }
    case CfKind::compound_poisson: {
      const auto& p = *cf.tsd_params();
      const double c1 = cumulant_closed_form(p, 1);
      const double c2 = cumulant_closed_form(p, 2);
      return {c1, std::sqrt(c2 + c1 * c1 / cf.index())};
    }
    case CfKind::ratio: {
      const auto& p = *cf.tsd_params();
      const double t = cf.index();
      const double c1 = cumulant_closed_form(p, 1) * -std::expm1(-t);
      const double c2 = cumulant_closed_form(p, 2) * -std::expm1(-2.0 * t);
      return {c1, std::sqrt(std::max(c2, 0.0))};
    }
    case CfKind::svgd:
    case CfKind::normal: {
      // Both are centred; the variance is -φ''(0), estimated from the exact cf.
      const double h = 1e-3;
      const double second = (2.0 * std::real(cf(h)) - 2.0) / (h * h);
      return {0.0, std::sqrt(-second)};
    }
    case CfKind::stable: break;
  }
  return {0.0, 1.0};
}

}  // namespace

NumericLaw make_law(const CharFn& cf, const InversionControls& ctrl) {
  std::vector<Atom> atoms;
  if (cf.kind() == CfKind::compound_poisson) atoms.push_back({0.0, std::exp(-cf.index())});
  if (cf.kind() == CfKind::ratio) {
    const auto& p = *cf.tsd_params();
    const double t = cf.index();
    if (t == 0.0) {
      atoms.push_back({0.0, 1.0});
    } else if (p.is_bgd()) {
      atoms.push_back({0.0, std::exp(-t * (p.m1() + p.m2()))});
    }
  }

  if (cf.kind() == CfKind::stable) {
    const auto& p = *cf.stable_params();
    // |φ(z)| = exp(-c |z|^α), so the law's natural width is c^{1/α}.
    const double a = p.alpha();
    const double c = -gamma_fn(-a) * (p.m1() + p.m2()) * std::cos(0.5 * a * M_PI);
    const double scale = std::pow(c, 1.0 / a);
    NumericLaw probe(cf, {}, -scale, scale, scale, ctrl);
    const double tail = 5e-5;
    double hi = scale;
    while (1.0 - probe.cdf(hi) > tail && hi < 1e300) hi *= 4.0;
    double lo = -scale;
    while (probe.cdf(lo) > tail && lo > -1e300) lo *= 4.0;
    return {cf, {}, lo, hi, scale, ctrl};
  }

  const auto mom = light_tail_moments(cf);
  if (!(mom.sd > 0.0)) return {cf, atoms, -1.0, 1.0, 1.0, ctrl};
  return {cf, atoms, mom.mean - 12.0 * mom.sd, mom.mean + 12.0 * mom.sd, mom.sd, ctrl};
}

NumericLaw law_of_Xt(const TsdParams& params, double t, const InversionControls& ctrl) {
  if (!(t >= 0.0)) throw std::invalid_argument("law_of_Xt needs t >= 0");
  return make_law(CharFn::ratio(params, t), ctrl);
}

}  // namespace tsd
