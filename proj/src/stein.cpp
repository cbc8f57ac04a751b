#include "tsd/stein.hpp"

#include "tsd/charfn.hpp"
#include "tsd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-width of the strip around the real axis where φ_ts(z)/φ_ts(sz) is analytic:
// ψ has its branch points at z = -iλ₁ and z = iλ₂.
double ratio_strip(const TsdParams& p) { return std::min(p.lambda1(), p.lambda2()); }

}  // namespace

QuadResult levy_integral_term(const TsdParams& params, const RealFn& f, double x, double rel_tol,
                              double abs_tol) {
  const Tail& r = params.right();
  const Tail& l = params.left();
  auto up = [&](double u) { return u * f(x + u); };
  auto down = [&](double w) { return w * f(x - w); };
  const auto a = integrate_levy_tail(up, r.m, r.alpha, r.lambda, kInf, rel_tol, 1.0, 0.0, 0.5 * abs_tol);
  const auto b = integrate_levy_tail(down, l.m, l.alpha, l.lambda, kInf, rel_tol, 1.0, 0.0, 0.5 * abs_tol);
  return {a.value - b.value, a.error + b.error};
}

QuadResult stein_apply(const TsdParams& params, const RealFn& f, double x, double rel_tol) {
  const auto jump = levy_integral_term(params, f, x, rel_tol);
  return {-x * f(x) + jump.value, jump.error};
}

double stein_identity_residual(const TsdParams& law, const TsdParams& measure, const TestFunction& f) {
  const NumericLaw X = make_law(CharFn::tempered(law));
  const RealFn& f0 = f.fn(0);
  const RealFn& f1 = f.fn(1);
  auto xf = [&](double x) { return x * f0(x); };
  auto dxf = [&](double x) { return f0(x) + x * f1(x); };
  auto jump = [&](double x) { return levy_integral_term(measure, f0, x, 1e-10, 1e-13).value; };
  auto djump = [&](double x) { return levy_integral_term(measure, f1, x, 1e-10, 1e-13).value; };
  return X.expect(xf, dxf) - X.expect(jump, djump);
}

double stein_identity_residual(const TsdParams& params, const TestFunction& f) {
  return stein_identity_residual(params, params, f);
}

double semigroup_apply(const TsdParams& params, const RealFn& g, const RealFn& dg, double t, double x) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be nonnegative");
  if (t == 0.0) return g(x);
  const double shift = x * std::exp(-t);
  const NumericLaw law = law_of_Xt(params, t);
  return law.expect([&](double y) { return g(shift + y); }, [&](double y) { return dg(shift + y); });
}

double semigroup_apply(const TsdParams& params, const TestFunction& h, double t, double x,
                       SemigroupRoute route) {
  if (!(t >= 0.0)) throw std::invalid_argument("semigroup time must be nonnegative");
  if (t == 0.0) return h(x);
  if (route == SemigroupRoute::automatic)
    route = h.spectrum() ? SemigroupRoute::spectral : SemigroupRoute::law;
  if (route == SemigroupRoute::law) return semigroup_apply(params, h.fn(0), h.fn(1), t, x);
  if (!h.spectrum()) throw std::invalid_argument("test function " + h.id() + " has no spectrum");
  const CharFn cf = CharFn::ratio(params, t);
  return spectral_expectation(*h.spectrum(), cf, x * std::exp(-t), ratio_strip(params)).value;
}

// Per s-node Parseval data: E h′(xs + X_t) = Re Σ c e^{iωxs} + (step/π) Re Σ_k M_k e^{i k step xs}.
struct SteinSolution::Rule {
  struct Node {
    double s = 0.0;
    double weight = 0.0;
    std::vector<complex> atom_coef;
    std::vector<complex> grid;  // ĝ(z_k) φ_t(z_k), first entry halved
  };
  std::vector<double> atom_freq;
  double step = 0.0;
  std::vector<Node> nodes;
};

SteinSolution::SteinSolution(const TsdParams& params, TestFunction h, SteinOptions options)
    : params_(params), h_(std::move(h)), strip_(ratio_strip(params)) {
  if (!h_.derivative_spectrum())
    throw std::invalid_argument("test function " + h_.id() + " has no spectrum for h'");
  const Spectrum& spec = *h_.derivative_spectrum();

  reach_ = options.reach;
  if (!(reach_ > 0.0)) {
    const double c1 = cumulant_closed_form(params, 1);
    const double sd = std::sqrt(cumulant_closed_form(params, 2));
    const double lam = std::min(params.lambda1(), params.lambda2());
    reach_ = std::abs(c1) + 12.0 * sd + 45.0 / lam + 1.0;
  }

  const TemperedExponent exponent(params);
  std::vector<double> zs;
  std::vector<complex> g_hat;
  std::vector<complex> psi;
  double step = 0.0;
  if (spec.has_density()) {
    const double d = 0.9 * std::min(strip_, spec.strip);
    step = 2.0 * M_PI * d / (reach_ * d + 36.0);
    const auto count = static_cast<std::size_t>(std::ceil(spec.cutoff / step));
    for (std::size_t k = 0; k <= count; ++k) {
      const double z = k * step;
      zs.push_back(z);
      g_hat.push_back(spec.density(z) * (k == 0 ? 0.5 : 1.0));
      psi.push_back(exponent(z));
    }
  }

  auto build = [&](const GaussRule& gauss) {
    auto rule = std::make_shared<Rule>();
    rule->step = step;
    for (const auto& atom : spec.atoms) rule->atom_freq.push_back(atom.first);
    for (std::size_t j = 0; j < gauss.nodes.size(); ++j) {
      Rule::Node node;
      node.s = gauss.nodes[j];
      node.weight = gauss.weights[j];
      for (const auto& [omega, amp] : spec.atoms)
        node.atom_coef.push_back(amp * std::exp(exponent(omega) - exponent(node.s * omega)));
      node.grid.reserve(zs.size());
      for (std::size_t k = 0; k < zs.size(); ++k)
        node.grid.push_back(g_hat[k] * std::exp(psi[k] - exponent(node.s * zs[k])));
      rule->nodes.push_back(std::move(node));
    }
    return rule;
  };
  fine_ = build(gauss_legendre_64());
  coarse_ = build(gauss_legendre_32());
}

double SteinSolution::rule_value(const Rule& rule, double x) const {
  double total = 0.0;
  for (const auto& node : rule.nodes) {
    const double a = x * node.s;
    double inner = 0.0;
    for (std::size_t k = 0; k < node.atom_coef.size(); ++k)
      inner += std::real(node.atom_coef[k] * std::polar(1.0, rule.atom_freq[k] * a));
    if (!node.grid.empty()) {
      const complex rotate = std::polar(1.0, rule.step * a);
      complex phase = 1.0;
      double sum = 0.0;
      for (const complex& m : node.grid) {
        sum += m.real() * phase.real() - m.imag() * phase.imag();
        phase *= rotate;
      }
      inner += sum * rule.step / M_PI;
    }
    total += node.weight * inner;
  }
  return -total;
}

double SteinSolution::slow_value(const std::vector<double>& nodes, const std::vector<double>& weights,
                                 double x) const {
  const Spectrum& spec = *h_.derivative_spectrum();
  const TemperedExponent exponent(params_);
  double total = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double s = nodes[j];
    auto cf = [&](double z) { return std::exp(exponent(z) - exponent(s * z)); };
    total += weights[j] * spectral_expectation(spec, cf, x * s, strip_).value;
  }
  return -total;
}

QuadResult SteinSolution::evaluate(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("Stein solution evaluated at a non-finite point");
  double fine = 0.0;
  double coarse = 0.0;
  if (std::abs(x) <= reach_) {
    fine = rule_value(*fine_, x);
    coarse = rule_value(*coarse_, x);
  } else {
    const auto& g64 = gauss_legendre_64();
    const auto& g32 = gauss_legendre_32();
    fine = slow_value(g64.nodes, g64.weights, x);
    coarse = slow_value(g32.nodes, g32.weights, x);
  }
  return {fine, std::abs(fine - coarse)};
}

double SteinSolution::derivative(int r, double x, double step) const {
  const auto& f = *this;
  auto first = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
  auto second = [&](double hh) { return (f(x + hh) - 2.0 * f(x) + f(x - hh)) / (hh * hh); };
  switch (r) {
    case 0: return f(x);
    case 1: return (4.0 * first(0.5 * step) - first(step)) / 3.0;
    case 2: return (4.0 * second(0.5 * step) - second(step)) / 3.0;
    default: throw std::invalid_argument("derivative order must be 0, 1 or 2");
  }
}

SteinSolution solve_stein(const TsdParams& params, const TestFunction& h, SteinOptions options) {
  return SteinSolution(params, h, options);
}

DerivativeBoundReport verify_derivative_bounds(const SteinSolution& solution, int r) {
  if (r < 0 || r > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
  const auto& params = solution.params();
  const auto& h = solution.h();
  DerivativeBoundReport report;
  report.order = r;
  report.bound = h.sup_norm(r + 1) / (r + 1);
  const double c1 = cumulant_closed_form(params, 1);
  const double sd = std::sqrt(cumulant_closed_form(params, 2));
  const double lo = c1 - 12.0 * sd;
  const double hi = c1 + 12.0 * sd;
  const int points = 64;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    report.grid.push_back(x);
    report.values.push_back(solution.derivative(r, x));
  }
  for (double v : report.values) report.observed_max = std::max(report.observed_max, std::abs(v));
  bool ok = report.observed_max <= report.bound + report.slack;
  if (r == 1) {
    report.lipschitz_bound = h.sup_norm(3) / 3.0;
    for (int i = 0; i < points; ++i)
      for (int j = i + 1; j < points; ++j) {
        const double ratio = std::abs(report.values[static_cast<std::size_t>(i)] - report.values[static_cast<std::size_t>(j)]) /
                             (report.grid[static_cast<std::size_t>(j)] - report.grid[static_cast<std::size_t>(i)]);
        report.lipschitz_ratio = std::max(report.lipschitz_ratio, ratio);
      }
    ok = ok && report.lipschitz_ratio <= report.lipschitz_bound + report.slack;
  }
  report.passed = ok;
  return report;
}

DerivativeBoundReport verify_derivative_bounds(const TsdParams& params, const TestFunction& h, int r) {
  return verify_derivative_bounds(SteinSolution(params, h), r);
}

}  // namespace tsd
