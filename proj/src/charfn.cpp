#include "tsd/charfn.hpp"

#include "tsd/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsd {

TemperedExponent::Side TemperedExponent::make_side(const Tail& tail) {
  return {tail.m * gamma_fn(1.0 - tail.alpha) * std::pow(tail.lambda, tail.alpha), tail.alpha, tail.lambda};
}

complex TemperedExponent::side_value(const Side& side, double z) {
  if (z == 0.0) return {0.0, 0.0};
  // log(1 - iz/λ) on the principal branch; its argument has real part 1.
  const complex log_ratio = std::log(complex(1.0, -z / side.lambda));
  // m Γ(-α) [(λ - iz)^α - λ^α] = -m Γ(1-α) λ^α (e^{α L} - 1) / α, which reduces to
  // -m L when α = 0.
  return -side.scale * expm1_over(side.alpha, log_ratio);
}

TemperedExponent::TemperedExponent(const TsdParams& params)
    : right_(make_side(params.right())), left_(make_side(params.left())) {}

complex TemperedExponent::operator()(double z) const {
  return side_value(right_, z) + side_value(left_, -z);
}

complex tail_exponent(const Tail& tail, double z) {
  const double scale = tail.m * gamma_fn(1.0 - tail.alpha) * std::pow(tail.lambda, tail.alpha);
  if (z == 0.0) return {0.0, 0.0};
  return -scale * expm1_over(tail.alpha, std::log(complex(1.0, -z / tail.lambda)));
}

complex tempered_exponent(const TsdParams& params, double z) { return TemperedExponent(params)(z); }

double tail_log_mgf(const Tail& tail, double theta) {
  if (!(theta < tail.lambda)) return std::numeric_limits<double>::infinity();
  if (theta == 0.0) return 0.0;
  // Same expression as tail_exponent with iz replaced by θ.
  const double log_ratio = std::log1p(-theta / tail.lambda);
  const double scale = tail.m * gamma_fn(1.0 - tail.alpha) * std::pow(tail.lambda, tail.alpha);
  const double e = tail.alpha == 0.0 ? log_ratio : std::expm1(tail.alpha * log_ratio) / tail.alpha;
  return -scale * e;
}

double tempered_log_mgf(const TsdParams& params, double theta) {
  return tail_log_mgf(params.right(), theta) + tail_log_mgf(params.left(), -theta);
}

complex tempered_exponent_quadrature(const TsdParams& params, double z, double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  const double freq = std::abs(z);
  auto re_part = [z](double u) {
    const double s = std::sin(0.5 * z * u);
    return -2.0 * s * s;
  };
  auto im_part = [z](double u) { return std::sin(z * u); };
  complex total{0.0, 0.0};
  for (int side = 0; side < 2; ++side) {
    const Tail& t = side == 0 ? params.right() : params.left();
    const double sign = side == 0 ? 1.0 : -1.0;
    const auto re = integrate_levy_tail(re_part, t.m, t.alpha, t.lambda, inf, tol, 2.0, freq);
    const auto im = integrate_levy_tail(im_part, t.m, t.alpha, t.lambda, inf, tol, 2.0, freq);
    total += complex(re.value, sign * im.value);
  }
  return total;
}

complex cf_tempered(const TsdParams& params, double z) {
  return std::exp(tempered_exponent(params, z));
}

complex cf_stable(const StableParams& params, double z) {
  if (z == 0.0) return {1.0, 0.0};
  const double a = params.alpha();
  const double g = gamma_fn(-a);
  const double mag = std::pow(std::abs(z), a);
  const double phase = 0.5 * a * M_PI * (z > 0.0 ? 1.0 : -1.0);
  // (-iz)^α = |z|^α e^{-iαπ/2 sign z}, (iz)^α = |z|^α e^{iαπ/2 sign z}
  const complex exponent = g * mag *
                           (params.m1() * std::polar(1.0, -phase) + params.m2() * std::polar(1.0, phase));
  return std::exp(exponent);
}

complex cf_compound_poisson(const TsdParams& params, int n, double z) {
  if (n < 1) throw std::invalid_argument("compound Poisson size must be >= 1");
  const double nn = static_cast<double>(n);
  return std::exp(nn * expm1(tempered_exponent(params, z) / nn));
}

complex cf_svgd(double m, double lambda, double z) {
  if (!(m > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("SVGD parameters must be positive");
  return {std::exp(-m * std::log1p(z * z * lambda * lambda / (2.0 * m))), 0.0};
}

complex cf_ratio(const TsdParams& params, double t, double z) {
  if (!(t >= 0.0)) throw std::invalid_argument("ratio time must be nonnegative");
  if (t == 0.0) return {1.0, 0.0};
  const TemperedExponent psi(params);
  return std::exp(psi(z) - psi(std::exp(-t) * z));
}

complex cf_normal(double sigma, double z) { return {std::exp(-0.5 * sigma * sigma * z * z), 0.0}; }

std::string to_string(CfKind kind) {
  switch (kind) {
    case CfKind::tempered: return "tempered";
    case CfKind::stable: return "stable";
    case CfKind::compound_poisson: return "compound_poisson";
    case CfKind::svgd: return "svgd";
    case CfKind::ratio: return "ratio";
    case CfKind::normal: return "normal";
  }
  return "tempered";
}

CharFn::CharFn(CfKind kind, Source source, double index)
    : kind_(kind), source_(std::move(source)), index_(index) {
  if (const auto* p = std::get_if<TsdParams>(&source_)) psi_.emplace(*p);
}

complex CharFn::tsd_exponent(double z) const {
  if (!psi_) throw std::logic_error("characteristic function has no TSD exponent");
  return (*psi_)(z);
}

CharFn CharFn::tempered(const TsdParams& params) { return {CfKind::tempered, params, 0.0}; }

CharFn CharFn::stable(const StableParams& params) { return {CfKind::stable, params, 0.0}; }

CharFn CharFn::compound_poisson(const TsdParams& params, int n) {
  if (n < 1) throw std::invalid_argument("compound Poisson size must be >= 1");
  return {CfKind::compound_poisson, params, static_cast<double>(n)};
}

CharFn CharFn::svgd(double m, double lambda) {
  if (!(m > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("SVGD parameters must be positive");
  return {CfKind::svgd, Svgd{m, lambda}, 0.0};
}

CharFn CharFn::ratio(const TsdParams& params, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("ratio time must be nonnegative");
  return {CfKind::ratio, params, t};
}

CharFn CharFn::normal(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal scale must be positive");
  return {CfKind::normal, sigma, 0.0};
}

complex CharFn::operator()(double z) const {
  switch (kind_) {
    case CfKind::tempered: return std::exp((*psi_)(z));
    case CfKind::stable: return cf_stable(std::get<StableParams>(source_), z);
    case CfKind::compound_poisson: return std::exp(index_ * expm1((*psi_)(z) / index_));
    case CfKind::svgd: {
      const auto& s = std::get<Svgd>(source_);
      return cf_svgd(s.m, s.lambda, z);
    }
    case CfKind::ratio:
      if (index_ == 0.0) return {1.0, 0.0};
      return std::exp((*psi_)(z) - (*psi_)(std::exp(-index_) * z));
    case CfKind::normal: return cf_normal(std::get<double>(source_), z);
  }
  return {1.0, 0.0};
}

double CharFn::log_mgf(double theta) const {
  const double inf = std::numeric_limits<double>::infinity();
  if (theta == 0.0) return 0.0;
  switch (kind_) {
    case CfKind::tempered: return tempered_log_mgf(std::get<TsdParams>(source_), theta);
    case CfKind::stable: return inf;
    case CfKind::compound_poisson: {
      const double k = tempered_log_mgf(std::get<TsdParams>(source_), theta);
      if (!std::isfinite(k)) return inf;
      return index_ * std::expm1(k / index_);
    }
    case CfKind::svgd: {
      const auto& s = std::get<Svgd>(source_);
      const double q = theta * theta * s.lambda * s.lambda / (2.0 * s.m);
      return q < 1.0 ? -s.m * std::log1p(-q) : inf;
    }
    case CfKind::ratio: {
      const auto& p = std::get<TsdParams>(source_);
      const double a = tempered_log_mgf(p, theta);
      if (!std::isfinite(a)) return inf;
      return a - tempered_log_mgf(p, std::exp(-index_) * theta);
    }
    case CfKind::normal: {
      const double sigma = std::get<double>(source_);
      return 0.5 * theta * theta * sigma * sigma;
    }
  }
  return inf;
}

const TsdParams* CharFn::tsd_params() const { return std::get_if<TsdParams>(&source_); }

const StableParams* CharFn::stable_params() const { return std::get_if<StableParams>(&source_); }

}  // namespace tsd
