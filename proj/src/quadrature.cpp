#include "tsd/quadrature.hpp"

#include "tsd/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tsd {

namespace {

// Error estimates below this fraction of ∫|f| are roundoff, not truncation.
constexpr double kRoundoff = 1000.0 * std::numeric_limits<double>::epsilon();
// Integrands that have underflowed into subnormals are noise; never refine below this.
constexpr double kAbsFloor = 1e-290;

}  // namespace

QuadResult integrate(const RealFn& f, double a, double b, double rel_tol, double abs_tol,
                     unsigned max_depth) {
  const auto r = integrate_unchecked(f, a, b, rel_tol, abs_tol, max_depth);
  const double budget = std::max({abs_tol, kAbsFloor, rel_tol * r.l1, std::numeric_limits<double>::min()});
  if (!std::isfinite(r.value) || r.error > std::max(budget, kRoundoff * r.l1)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error estimate "
        << r.error << " exceeds budget " << budget;
    throw NumericalError(msg.str(), r.error);
  }
  return {r.value, r.error};
}

UncheckedResult integrate_unchecked(const RealFn& f, double a, double b, double rel_tol, double abs_tol,
                                    unsigned max_depth) {
  if (a == b) return {};
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  double error = 0.0;
  double l1 = 0.0;
  double target = rel_tol;
  abs_tol = std::max(abs_tol, kAbsFloor);
  {
    // Boost stops on error ≤ tol·L1 only; turn the absolute budget into a relative
    // one from a single-panel estimate of L1, so tiny integrands don't bisect noise.
    Rule::integrate(f, a, b, 0, rel_tol, &error, &l1);
    if (l1 > 0.0) target = std::max(rel_tol, 0.5 * abs_tol / l1);
  }
  const double value = Rule::integrate(f, a, b, max_depth, target, &error, &l1);
  return {value, error, l1};
}

QuadResult integrate_panels(const RealFn& f, double a, double b, int pieces, double rel_tol,
                            double abs_tol, unsigned max_depth) {
  pieces = std::max(pieces, 1);
  QuadResult total;
  const double width = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * width;
    const double hi = (k + 1 == pieces) ? b : lo + width;
    const auto part = integrate(f, lo, hi, rel_tol, abs_tol / pieces, max_depth);
    total.value += part.value;
    total.error += part.error;
  }
  return total;
}

QuadResult integrate_levy_tail(const RealFn& g, double m, double alpha, double lambda,
                               double upper, double rel_tol, double growth, double frequency,
                               double abs_tol) {
  if (!(upper > 0.0)) return {};
  // Scale where the tempering starts to matter; the singular map covers [0, c].
  const double c = std::min({upper, 1.0 / lambda, 1.0});
  const double power = 1.0 / (1.0 - alpha);

  auto near = [&](double t) {
    const double u = c * std::pow(t, power);
    if (u == 0.0) return 0.0;
    const double jacobian = c * power * std::pow(t, power - 1.0);
    return g(u) * m * std::pow(u, -1.0 - alpha) * std::exp(-lambda * u) * jacobian;
  };
  auto head = integrate(near, 0.0, 1.0, rel_tol, 0.5 * abs_tol);

  double cut = upper;
  if (!std::isfinite(cut)) {
    const double peak = std::max(growth - 1.0 - alpha, 0.0) / lambda;
    cut = std::max(c, peak) + (40.0 + 2.0 * growth) / lambda;
  }
  if (cut <= c) return head;

  auto far = [&](double u) {
    return g(u) * m * std::pow(u, -1.0 - alpha) * std::exp(-lambda * u);
  };
  int pieces = 8;
  if (frequency > 0.0) {
    const double period = 2.0 * M_PI / frequency;
    pieces = std::clamp(static_cast<int>((cut - c) / (4.0 * period)) + 1, 8, 4000);
  }
  const auto tail = integrate_panels(far, c, cut, pieces, rel_tol,
                                     std::max(rel_tol * std::abs(head.value), 0.5 * abs_tol));
  return {head.value + tail.value, head.error + tail.error};
}

namespace {

template <unsigned N>
GaussRule unit_gauss_rule() {
  using Gauss = boost::math::quadrature::gauss<double, N>;
  GaussRule r;
  const auto& abscissa = Gauss::abscissa();
  const auto& weights = Gauss::weights();
  // Boost stores the non-negative half of the symmetric rule on [-1, 1].
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    const double x = abscissa[i];
    const double w = weights[i];
    r.nodes.push_back(0.5 * (1.0 + x));
    r.weights.push_back(0.5 * w);
    if (x != 0.0) {
      r.nodes.push_back(0.5 * (1.0 - x));
      r.weights.push_back(0.5 * w);
    }
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre_64() {
  static const GaussRule rule = unit_gauss_rule<64>();
  return rule;
}

const GaussRule& gauss_legendre_32() {
  static const GaussRule rule = unit_gauss_rule<32>();
  return rule;
}

namespace {

// Node/weight rows of one Ooura-Mori level: "big" nodes for n ≥ 0 and "little" nodes
// for n < 0, truncated where the weights fall below roundoff, as Boost does. The
// nodes themselves come from Boost's generators, evaluated in long double.
struct OouraLevel {
  std::vector<double> nodes;
  std::vector<double> weights;
};

constexpr std::size_t kOouraLevels = 9;

OouraLevel ooura_level(FourierKind kind, std::size_t level) {
  namespace bd = boost::math::quadrature::detail;
  using Precise = long double;
  const Precise h = Precise(1) / Precise(1u << level);
  const Precise alpha = bd::calculate_ooura_alpha(h);
  auto node_weight = [&](long n) {
    return kind == FourierKind::sine ? bd::ooura_sin_node_and_weight(n, h, alpha)
                                     : bd::ooura_cos_node_and_weight(n, h, alpha);
  };
  OouraLevel row;
  double max_weight = 1.0;
  const double roundoff = std::numeric_limits<double>::epsilon() / 2;
  for (long n = 0;; ++n) {
    const auto [node, weight] = node_weight(n);
    const double w = static_cast<double>(weight);
    row.nodes.push_back(static_cast<double>(node));
    row.weights.push_back(w);
    max_weight = std::max(max_weight, std::abs(w));
    if (!(std::abs(w) > roundoff * max_weight)) break;
  }
  double last = std::numeric_limits<double>::quiet_NaN();
  for (long n = -1;; --n) {
    const auto [precise_node, weight] = node_weight(n);
    const double node = static_cast<double>(precise_node);
    // Little nodes shrink towards 0 and eventually fuse.
    if (std::isnan(node) || node == last || (kind == FourierKind::sine ? node <= 0.0 : node < 0.0)) break;
    const double w = static_cast<double>(weight);
    row.nodes.push_back(node);
    row.weights.push_back(w);
    last = node;
    max_weight = std::max(max_weight, std::abs(w));
    if (!(std::abs(w) > std::numeric_limits<double>::min() * max_weight)) break;
  }
  return row;
}

const std::vector<OouraLevel>& ooura_table(FourierKind kind) {
  auto build = [](FourierKind k) {
    std::vector<OouraLevel> levels;
    for (std::size_t i = 0; i < kOouraLevels; ++i) levels.push_back(ooura_level(k, i));
    return levels;
  };
  static const std::vector<OouraLevel> sine = build(FourierKind::sine);
  static const std::vector<OouraLevel> cosine = build(FourierKind::cosine);
  return kind == FourierKind::sine ? sine : cosine;
}

}  // namespace

QuadResult integrate_fourier(const RealFn& f, double omega, FourierKind kind, double rel_tol) {
  if (omega == 0.0) {
    if (kind == FourierKind::sine) return {0.0, 0.0};
    throw std::invalid_argument("cosine transform at zero frequency is not oscillatory");
  }
  if (omega < 0.0) {
    const auto r = integrate_fourier(f, -omega, kind, rel_tol);
    return {kind == FourierKind::sine ? -r.value : r.value, r.error};
  }
  const auto& table = ooura_table(kind);
  const double inv = 1.0 / omega;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double diff = std::numeric_limits<double>::infinity();
  for (const auto& level : table) {
    double sum = 0.0;
    for (std::size_t j = 0; j < level.nodes.size(); ++j) sum += f(level.nodes[j] * inv) * level.weights[j];
    if (!std::isnan(previous)) {
      diff = std::abs(sum - previous);
      if (diff <= rel_tol * std::max(std::abs(sum), std::abs(previous))) return {sum * inv, diff * inv};
    }
    previous = sum;
  }
  return {previous * inv, diff * inv};
}

}  // namespace tsd
