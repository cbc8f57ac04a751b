#include "tsd/model.hpp"

#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsd {

namespace {

void validate_tail(const Tail& t, const char* side) {
  if (!(t.m > 0.0) || !std::isfinite(t.m))
    throw std::invalid_argument(std::string("m of ") + side + " tail must be positive");
  if (!(t.lambda > 0.0) || !std::isfinite(t.lambda))
    throw std::invalid_argument(std::string("lambda of ") + side + " tail must be positive");
  if (!(t.alpha >= 0.0 && t.alpha < 1.0))
    throw std::invalid_argument(std::string("alpha of ") + side + " tail must lie in [0, 1)");
}

double tail_density(const Tail& t, double u) {
  return t.m * std::pow(u, -1.0 - t.alpha) * std::exp(-t.lambda * u);
}

}  // namespace

std::string to_string(SubFamily family) {
  switch (family) {
    case SubFamily::tsd: return "TSD";
    case SubFamily::kobol: return "KoBol";
    case SubFamily::cgmy: return "CGMY";
    case SubFamily::bgd: return "BGD";
    case SubFamily::vgd: return "VGD";
    case SubFamily::svgd: return "SVGD";
  }
  return "TSD";
}

TsdParams::TsdParams(double m1, double alpha1, double lambda1, double m2, double alpha2,
                     double lambda2)
    : TsdParams(Tail{m1, alpha1, lambda1}, Tail{m2, alpha2, lambda2}) {}

TsdParams::TsdParams(Tail right, Tail left) : right_(right), left_(left) {
  validate_tail(right_, "right");
  validate_tail(left_, "left");
}

SubFamily TsdParams::family() const {
  if (is_svgd()) return SubFamily::svgd;
  if (is_vgd()) return SubFamily::vgd;
  if (is_bgd()) return SubFamily::bgd;
  if (is_cgmy()) return SubFamily::cgmy;
  if (is_kobol()) return SubFamily::kobol;
  return SubFamily::tsd;
}

bool TsdParams::is_symmetric() const {
  return right_.m == left_.m && right_.alpha == left_.alpha && right_.lambda == left_.lambda;
}

TsdParams TsdParams::scaled_intensity(double factor) const {
  Tail r = right_;
  Tail l = left_;
  r.m *= factor;
  l.m *= factor;
  return {r, l};
}

std::vector<double> TsdParams::as_vector() const {
  return {right_.m, right_.alpha, right_.lambda, left_.m, left_.alpha, left_.lambda};
}

TsdParams bgd(double m1, double lambda1, double m2, double lambda2) {
  return {m1, 0.0, lambda1, m2, 0.0, lambda2};
}

TsdParams vgd(double m, double lambda1, double lambda2) { return {m, 0.0, lambda1, m, 0.0, lambda2}; }

TsdParams svgd(double m, double lambda) { return {m, 0.0, lambda, m, 0.0, lambda}; }

StableParams::StableParams(double m1, double m2, double alpha) : m1_(m1), m2_(m2), alpha_(alpha) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw std::invalid_argument("stable intensities must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("stable alpha must lie in (0, 1)");
}

double levy_density(const TsdParams& params, double u) {
  if (u == 0.0) throw std::domain_error("Levy density is singular at u = 0");
  return u > 0.0 ? tail_density(params.right(), u) : tail_density(params.left(), -u);
}

double levy_density(const StableParams& params, double u) {
  if (u == 0.0) throw std::domain_error("Levy density is singular at u = 0");
  const double m = u > 0.0 ? params.m1() : params.m2();
  return m * std::pow(std::abs(u), -1.0 - params.alpha());
}

double tempering(const TsdParams& params, double u) {
  if (u == 0.0) throw std::domain_error("tempering function evaluated at u = 0");
  return u > 0.0 ? std::exp(-params.lambda1() * u) : std::exp(-params.lambda2() * -u);
}

double tail_moment(const Tail& tail, int n) {
  const double s = n - tail.alpha;
  return gamma_fn(s) * tail.m / std::pow(tail.lambda, s);
}

double cumulant_closed_form(const TsdParams& params, int n) {
  if (n < 1) throw std::invalid_argument("cumulant order must be >= 1");
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return tail_moment(params.right(), n) + sign * tail_moment(params.left(), n);
}

double cumulant_quadrature(const TsdParams& params, int n, double tol) {
  if (n < 1) throw std::invalid_argument("cumulant order must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  auto power = [n](double u) { return std::pow(u, n); };
  const double inf = std::numeric_limits<double>::infinity();
  const auto& r = params.right();
  const auto& l = params.left();
  const auto right = integrate_levy_tail(power, r.m, r.alpha, r.lambda, inf, tol, n);
  const auto left = integrate_levy_tail(power, l.m, l.alpha, l.lambda, inf, tol, n);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return right.value + sign * left.value;
}

CumulantVector cumulants(const TsdParams& params, int count, CumulantSource source) {
  CumulantVector out;
  out.source = source;
  for (int n = 1; n <= count; ++n) {
    out.values.push_back(source == CumulantSource::closed_form ? cumulant_closed_form(params, n)
                                                               : cumulant_quadrature(params, n));
  }
  return out;
}

double drift_b(const TsdParams& params) {
  auto identity = [](double u) { return u; };
  const auto& r = params.right();
  const auto& l = params.left();
  const auto right = integrate_levy_tail(identity, r.m, r.alpha, r.lambda, 1.0, 1e-12, 1.0);
  const auto left = integrate_levy_tail(identity, l.m, l.alpha, l.lambda, 1.0, 1e-12, 1.0);
  return right.value - left.value;
}

std::vector<TsdParams> default_grid() {
  static constexpr double ms[] = {0.5, 1.0, 2.0};
  static constexpr double alphas[] = {0.0, 0.3, 0.7};
  static constexpr double lambdas[] = {0.5, 1.0, 3.0};
  std::vector<TsdParams> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        grid.emplace_back(ms[i], alphas[j], lambdas[k], ms[(i + k) % 3], alphas[(j + k) % 3],
                          lambdas[(j + k) % 3]);
  return grid;
}

}  // namespace tsd
