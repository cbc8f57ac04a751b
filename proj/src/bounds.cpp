#include "tsd/bounds.hpp"

#include "tsd/charfn.hpp"
#include "tsd/errors.hpp"
#include "tsd/inversion.hpp"
#include "tsd/kernels.hpp"
#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace tsd {

double bound_cpd(const TsdParams& params, int n, double c) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  const double s = std::abs(cumulant_closed_form(params, 1)) + std::abs(cumulant_closed_form(params, 2));
  return c * std::pow(s, 0.4) * std::pow(static_cast<double>(n), -0.2);
}

double M_alpha_closed_form(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::domain_error("closed form needs alpha in (0, 1/2)");
  return gamma_fn(-(1.0 + 2.0 * alpha)) * (std::pow(2.0, 1.0 + 2.0 * alpha) - 2.0);
}

double M_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (alpha >= 0.5) {
    std::ostringstream msg;
    msg << "M(alpha) diverges for alpha = " << alpha << ": the integrand behaves like u^(-"
        << 2.0 * alpha << ") at 0";
    throw DivergenceError(msg.str());
  }
  // ((1 - e^{-u})/u)² u^{-2α}, written so that neither end overflows.
  auto integrand = [alpha](double u) {
    const double q = -std::expm1(-u) / u;
    return q * q * std::pow(u, -2.0 * alpha);
  };
  // tanh-sinh is built for algebraic endpoint singularities like u^{-2α} at 0.
  boost::math::quadrature::tanh_sinh<double> rule;
  double head_error = 0.0;
  const double head = rule.integrate(integrand, 0.0, 1.0, 1e-14, &head_error);
  if (!(head_error <= 1e-12 * head)) throw NumericalError("M(alpha) quadrature near 0 did not converge", head_error);
  // u = 1/t turns the u^{-2-2α} tail into a t^{2α} endpoint term on (0, 1].
  auto mapped = [alpha](double t) {
    const double q = -std::expm1(-1.0 / t);
    return q * q * std::pow(t, 2.0 * alpha);
  };
  double tail_error = 0.0;
  const double tail = rule.integrate(mapped, 0.0, 1.0, 1e-14, &tail_error);
  if (!(tail_error <= 1e-12 * tail)) throw NumericalError("M(alpha) tail quadrature did not converge", tail_error);
  return head + tail;
}

double bound_stable(const TsdParams& params, double c1, double c2) {
  if (!params.is_kobol()) throw std::invalid_argument("stable bound needs alpha1 = alpha2 (KoBol)");
  const double a = params.alpha1();
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("stable bound needs alpha in (0, 1)");
  return c1 * std::pow(params.lambda1(), a + 0.5) + c2 * std::pow(params.lambda2(), a + 0.5);
}

namespace {

double h3_formula(double c1a, double c2a, double c3a, double c1b, double c2b, double c3b) {
  return std::abs(c1a - c1b) + 0.5 * std::abs(c2a - c2b) +
         c2b / 6.0 * std::abs(std::abs(c3a) / c2a - std::abs(c3b) / c2b);
}

}  // namespace

double bound_h3_two_tsd(const TsdParams& a, const TsdParams& b) {
  return h3_formula(cumulant_closed_form(a, 1), cumulant_closed_form(a, 2), cumulant_closed_form(a, 3),
                    cumulant_closed_form(b, 1), cumulant_closed_form(b, 2), cumulant_closed_form(b, 3));
}

double bound_normal_example(const TsdParams& params, double lam) {
  if (!(lam > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double c1 = cumulant_closed_form(params, 1);
  const double c2 = cumulant_closed_form(params, 2);
  const double c3 = cumulant_closed_form(params, 3);
  return std::abs(c1) + 0.5 * std::abs(c2 - lam * lam) + lam * lam / 6.0 * std::abs(c3) / c2;
}

double bound_vg_example(const TsdParams& params, double m, double lam1, double lam2) {
  if (!(m > 0.0) || !(lam1 > 0.0) || !(lam2 > 0.0))
    throw std::invalid_argument("VG parameters must be positive");
  const double v1 = m * (1.0 / lam1 - 1.0 / lam2);
  const double v2 = m * (1.0 / (lam1 * lam1) + 1.0 / (lam2 * lam2));
  const double v3 = 2.0 * m * (1.0 / (lam1 * lam1 * lam1) - 1.0 / (lam2 * lam2 * lam2));
  return h3_formula(cumulant_closed_form(params, 1), cumulant_closed_form(params, 2),
                    cumulant_closed_form(params, 3), v1, v2, v3);
}

double smoothing_constant(const TsdParams& params, double z_max, int points) {
  if (!(z_max > 0.0) || points < 2) throw std::invalid_argument("need z_max > 0 and points >= 2");
  const TemperedExponent psi(params);
  const double dz = z_max / points;
  double integral = 0.0;
  double prev = 1.0;  // 1/|φ(0)|
  double worst = 0.0;
  for (int k = 1; k <= points; ++k) {
    const double z = k * dz;
    const double log_mod = std::real(psi(z));
    const double inv = std::exp(-log_mod);
    integral += 0.5 * dz * (prev + inv);
    prev = inv;
    worst = std::max(worst, std::exp(log_mod) * integral / z);
  }
  return worst;
}

TsdParams continuity_neighbour(const TsdParams& target, double step) {
  auto move_alpha = [step](double a) {
    const double up = a + 0.5 * step;
    return up < 1.0 ? up : a - 0.5 * step;
  };
  return {target.m1() + step, move_alpha(target.alpha1()), target.lambda1() + step,
          target.m2() + step, move_alpha(target.alpha2()), target.lambda2() + step};
}

bool cumulant_gap_at_least(const TsdParams& a, const TsdParams& b, double gap) {
  double widest = 0.0;
  for (int j = 1; j <= 3; ++j)
    widest = std::max(widest, std::abs(cumulant_closed_form(a, j) - cumulant_closed_form(b, j)));
  return widest >= gap;
}

std::string to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::cpd: return "cpd";
    case Theorem::stable: return "stable";
    case Theorem::continuity: return "continuity";
    case Theorem::h3: return "h3";
  }
  return "cpd";
}

Theorem theorem_from_string(const std::string& name) {
  if (name == "cpd") return Theorem::cpd;
  if (name == "stable") return Theorem::stable;
  if (name == "continuity") return Theorem::continuity;
  if (name == "h3") return Theorem::h3;
  throw std::invalid_argument("unknown theorem '" + name + "' (cpd, stable, continuity, h3)");
}

SweepSpec default_sweep(Theorem theorem) {
  SweepSpec spec;
  spec.theorem = theorem;
  switch (theorem) {
    case Theorem::cpd:
      spec.target = bgd(1.0, 1.0, 1.0, 2.0);
      for (int n = 1; n <= 256; n *= 2) spec.values.push_back(n);
      break;
    case Theorem::stable:
      spec.target = TsdParams(1.0, 0.3, 1.0, 1.0, 0.3, 1.0);
      spec.values = {0.4, 0.2, 0.1, 0.05};
      break;
    case Theorem::continuity:
      spec.target = TsdParams(1.0, 0.3, 1.0, 1.5, 0.2, 2.0);
      spec.values = {1, 2, 4, 8, 16};
      break;
    case Theorem::h3: spec.pairs = default_h3_pairs().pairs; break;
  }
  return spec;
}

H3Pairs default_h3_pairs() {
  const auto grid = default_grid();
  H3Pairs out;
  for (std::size_t i = 0; i < grid.size() && out.pairs.size() < 10; ++i) {
    const auto& a = grid[i];
    const auto& b = grid[(i + 13) % grid.size()];
    if (cumulant_gap_at_least(a, b, 0.1))
      out.pairs.emplace_back(a, b);
    else
      out.excluded.emplace_back(a, b);
  }
  return out;
}

std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("log-log slope needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  const double slope = sxy / sxx;
  if (x.size() < 3) return {slope, 0.0};
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - my - slope * (std::log(x[i]) - mx);
    rss += r * r;
  }
  return {slope, std::sqrt(rss / (n - 2.0) / sxx)};
}

namespace {

std::vector<double> good_parameters(const BoundReport& r) {
  std::vector<double> v;
  for (const auto& p : r.points)
    if (!p.failed) v.push_back(p.parameter);
  return v;
}

std::vector<double> good_distances(const BoundReport& r) {
  std::vector<double> v;
  for (const auto& p : r.points)
    if (!p.failed) v.push_back(p.distance.value);
  return v;
}

// Each consecutive pair of points, in sweep order, is nonincreasing within the sum
// of their error bars (or strictly decreasing beyond it).
bool decreasing(const std::vector<SweepPoint>& pts, bool strict) {
  const SweepPoint* prev = nullptr;
  for (const auto& p : pts) {
    if (p.failed) continue;
    if (prev) {
      const double slack = prev->distance.error + p.distance.error;
      if (strict ? !(p.distance.value + slack < prev->distance.value)
                 : !(p.distance.value <= prev->distance.value + slack))
        return false;
    }
    prev = &p;
  }
  return true;
}

}  // namespace

void evaluate_verdicts(BoundReport& report, const SweepSpec& spec) {
  report.verdicts.clear();
  report.complete = std::none_of(report.points.begin(), report.points.end(),
                                 [](const SweepPoint& p) { return p.failed; });
  report.verdicts["complete"] = report.complete;
  if (spec.theorem == Theorem::h3) {
    bool ok = true;
    for (const auto& p : report.points)
      if (!p.failed && !(p.distance.value <= p.bound + p.distance.error)) ok = false;
    report.verdicts["lower_within_bound"] = ok;
    return;
  }
  const auto xs = good_parameters(report);
  const auto ys = good_distances(report);
  if (xs.size() >= 2 && std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; })) {
    const auto [slope, se] = loglog_slope(xs, ys);
    report.slope = slope;
    report.slope_se = se;
    double t = 0.0;
    if (xs.size() >= 3) {
      const boost::math::students_t dist(static_cast<double>(xs.size() - 2));
      t = boost::math::quantile(boost::math::complement(dist, 0.025));
    }
    report.slope_ci_lo = slope - t * se;
    report.slope_ci_hi = slope + t * se;
  }
  bool within = true;
  for (const auto& p : report.points)
    if (!p.failed && !(p.distance.value <= p.bound + p.distance.error)) within = false;
  switch (spec.theorem) {
    case Theorem::cpd:
      report.verdicts["nonincreasing"] = decreasing(report.points, false);
      report.verdicts["slope_at_most_-0.15"] = xs.size() >= 2 && report.slope <= -0.2 + 0.05;
      report.verdicts["within_calibrated_bound"] = within;
      break;
    case Theorem::stable: {
      const double alpha = spec.target.alpha1();
      report.verdicts["nonincreasing"] = decreasing(report.points, false);
      report.verdicts["slope_at_least_alpha+0.4"] = xs.size() >= 2 && report.slope >= alpha + 0.5 - 0.1;
      report.verdicts["within_calibrated_bound"] = within;
      break;
    }
    case Theorem::continuity:
      report.verdicts["strictly_decreasing"] = decreasing(report.points, true);
      report.verdicts["last_below_1e-2"] = !ys.empty() && !report.points.back().failed &&
                                           report.points.back().distance.value < 1e-2;
      break;
    case Theorem::h3: break;
  }
}

BoundReport rate_sweep(const SweepSpec& spec, std::uint64_t seed) {
  BoundReport report;
  report.theorem = to_string(spec.theorem);
  const std::size_t count = spec.theorem == Theorem::h3 ? spec.pairs.size() : spec.values.size();
  if (count == 0) throw std::invalid_argument("sweep has no points");
  report.points.resize(count);

  std::optional<NumericLaw> reference;
  switch (spec.theorem) {
    case Theorem::cpd:
      report.rate_form = "c (|C1| + |C2|)^(2/5) n^(-1/5)";
      reference.emplace(make_law(CharFn::tempered(spec.target)));
      report.constants["c0"] = smoothing_constant(spec.target);
      break;
    case Theorem::stable: {
      if (!spec.target.is_kobol()) throw std::invalid_argument("stable sweep needs a KoBol target");
      report.rate_form = "C1 lambda1^(alpha+1/2) + C2 lambda2^(alpha+1/2)";
      const StableParams sp(spec.target.m1(), spec.target.m2(), spec.target.alpha1());
      reference.emplace(make_law(CharFn::stable(sp)));
      break;
    }
    case Theorem::continuity:
      report.rate_form = "X_k -> X in law as params_k -> params";
      reference.emplace(make_law(CharFn::tempered(spec.target)));
      break;
    case Theorem::h3:
      report.rate_form = "|dC1| + |dC2|/2 + C2(X)/6 | |C3(X_n)|/C2(X_n) - |C3(X)|/C2(X) |";
      break;
  }

  const auto dict = smooth_dictionary();
  for_each_index(
      count,
      [&](std::size_t i) {
        SweepPoint& pt = report.points[i];
        pt.seed = seed;
        try {
          switch (spec.theorem) {
            case Theorem::cpd: {
              const int n = static_cast<int>(spec.values[i]);
              pt.parameter = n;
              pt.params = spec.target.as_vector();
              pt.distance = kolmogorov(make_law(CharFn::compound_poisson(spec.target, n)), *reference);
              break;
            }
            case Theorem::stable: {
              const double lam = spec.values[i];
              const TsdParams p(spec.target.m1(), spec.target.alpha1(), lam, spec.target.m2(),
                                spec.target.alpha2(), lam);
              pt.parameter = lam;
              pt.params = p.as_vector();
              pt.distance = kolmogorov(make_law(CharFn::tempered(p)), *reference);
              break;
            }
            case Theorem::continuity: {
              const double k = spec.values[i];
              const TsdParams p = continuity_neighbour(spec.target, 1.0 / k);
              pt.parameter = k;
              pt.params = p.as_vector();
              pt.distance = kolmogorov(make_law(CharFn::tempered(p)), *reference);
              pt.bound = bound_h3_two_tsd(p, spec.target);
              break;
            }
            case Theorem::h3: {
              const auto& [a, b] = spec.pairs[i];
              pt.parameter = static_cast<double>(i);
              pt.params = a.as_vector();
              pt.distance = smooth_h3_lower(make_law(CharFn::tempered(a)), make_law(CharFn::tempered(b)), dict);
              pt.bound = bound_h3_two_tsd(a, b);
              break;
            }
          }
        } catch (const std::exception& e) {
          pt.failed = true;
          pt.failure = e.what();
        }
      },
      Exec::parallel);

  // Nuisance constants are calibrated on the first point, then held fixed.
  const SweepPoint* first = nullptr;
  for (const auto& p : report.points)
    if (!p.failed) {
      first = &p;
      break;
    }
  if (first && spec.theorem == Theorem::cpd) {
    const double c = first->distance.value / bound_cpd(spec.target, static_cast<int>(first->parameter), 1.0);
    report.constants["c"] = c;
    for (auto& p : report.points) p.bound = bound_cpd(spec.target, static_cast<int>(p.parameter), c);
  }
  if (first && spec.theorem == Theorem::stable) {
    const double a = spec.target.alpha1();
    const double c = first->distance.value / (2.0 * std::pow(first->parameter, a + 0.5));
    report.constants["C1"] = c;
    report.constants["C2"] = c;
    for (auto& p : report.points) {
      const TsdParams tp(spec.target.m1(), a, p.parameter, spec.target.m2(), a, p.parameter);
      p.bound = bound_stable(tp, c, c);
    }
  }
  if (spec.theorem == Theorem::stable) {
    try {
      report.constants["M_alpha"] = M_alpha(spec.target.alpha1());
    } catch (const DivergenceError& e) {
      report.notes.push_back(e.what());
    }
  }
  if (spec.theorem == Theorem::h3) {
    for (const auto& [a, b] : spec.pairs)
      if (!cumulant_gap_at_least(a, b, 0.1))
        report.notes.push_back("cumulant-matched pair: bound uninformative/possibly violated");
  }
  for (const auto& p : report.points)
    if (p.failed) report.notes.push_back("point " + std::to_string(p.parameter) + " failed: " + p.failure);

  evaluate_verdicts(report, spec);
  return report;
}

}  // namespace tsd
