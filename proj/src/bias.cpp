#include "tsd/bias.hpp"

#include "tsd/errors.hpp"
#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

// Boost 1.74's pchip calls isnan unqualified.
#include <cmath>
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsd {

namespace {

// m λ^{α-1} Γ(1-α, λu): the tail integral of y ν(dy) from u on one side.
double eta_tail(const Tail& t, double u) {
  return t.m * std::pow(t.lambda, t.alpha - 1.0) * upper_gamma(1.0 - t.alpha, t.lambda * u);
}

// ∫_a^∞ η(w) dw = ∫_a^∞ (y - a) y ν(dy) = m λ^{α-2} Γ(2-α, λa) - a η(a).
double eta_tail_integral(const Tail& t, double a) {
  const double whole = t.m * std::pow(t.lambda, t.alpha - 2.0) * upper_gamma(2.0 - t.alpha, t.lambda * a);
  return std::max(whole - a * eta_tail(t, a), 0.0);
}

// Point beyond which one tail of f₁ carries less than `tiny` of the mass.
double tail_extent(const Tail& t, double total, double tiny) {
  double a = 1.0 / t.lambda;
  while (eta_tail_integral(t, a) > tiny * total) a *= 1.5;
  return a;
}

}  // namespace

double eta(const TsdParams& params, double u) {
  if (u == 0.0) throw std::domain_error("eta is not evaluated at u = 0");
  return u > 0.0 ? eta_tail(params.right(), u) : eta_tail(params.left(), -u);
}

double eta_quadrature(const TsdParams& params, double u) {
  if (u == 0.0) throw std::domain_error("eta is not evaluated at u = 0");
  const Tail& t = u > 0.0 ? params.right() : params.left();
  const double a = std::abs(u);
  auto f = [&t](double y) { return t.m * std::pow(y, -t.alpha) * std::exp(-t.lambda * y); };
  return integrate(f, a, std::numeric_limits<double>::infinity(), 1e-12).value;
}

struct BiasDistribution::Quantile {
  boost::math::interpolators::pchip<std::vector<double>> curve;
};

BiasDistribution::BiasDistribution(const TsdParams& params)
    : params_(params), c2_(cumulant_closed_form(params, 2)) {
  const Tail& r = params.right();
  const Tail& l = params.left();
  left_mass_ = eta_tail_integral(l, 0.0) / c2_;

  const double tiny = 1e-14;
  const double hi = tail_extent(r, c2_, tiny);
  const double lo = -tail_extent(l, c2_, tiny);

  // Quadratic spacing from 0 outwards: f₁ has an infinite slope at 0 when α > 0.
  for (int per_side = 512;; per_side *= 2) {
    nodes_.clear();
    for (int k = per_side; k >= 1; --k) {
      const double s = static_cast<double>(k) / per_side;
      nodes_.push_back(lo * s * s);
    }
    nodes_.push_back(0.0);
    for (int k = 1; k <= per_side; ++k) {
      const double s = static_cast<double>(k) / per_side;
      nodes_.push_back(hi * s * s);
    }
    double mass = 0.0;
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
      const double a = nodes_[k];
      const double b = nodes_[k + 1];
      // One-sided values at 0, where f₁ jumps.
      const double fa = a == 0.0 ? eta_tail(r, 0.0) / c2_ : pdf(a);
      const double fb = b == 0.0 ? eta_tail(l, 0.0) / c2_ : pdf(b);
      mass += 0.5 * (b - a) * (fa + fb);
    }
    grid_mass_ = mass;
    if (std::abs(mass - 1.0) < 1e-6) break;
    if (per_side >= (1 << 20)) {
      std::ostringstream msg;
      msg << "bias density tabulation stalled with trapezoid mass " << mass;
      throw NumericalError(msg.str(), std::abs(mass - 1.0));
    }
  }
  if (outside_mass() > 1e-6) {
    std::ostringstream msg;
    msg << "bias tabulation leaves mass " << outside_mass() << " outside the grid";
    throw NumericalError(msg.str(), outside_mass());
  }

  cdf_values_.reserve(nodes_.size());
  for (double u : nodes_) cdf_values_.push_back(cdf(u));

  // Monotone cubic for u as a function of F, on strictly increasing CDF values.
  std::vector<double> ps;
  std::vector<double> us;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (!ps.empty() && cdf_values_[k] <= ps.back()) continue;
    ps.push_back(cdf_values_[k]);
    us.push_back(nodes_[k]);
  }
  quantile_ = std::make_shared<const Quantile>(Quantile{{std::move(ps), std::move(us)}});
}

double BiasDistribution::pdf(double u) const {
  if (u == 0.0) return 0.5 * (eta_tail(params_.right(), 0.0) + eta_tail(params_.left(), 0.0)) / c2_;
  return eta(params_, u) / c2_;
}

double BiasDistribution::cdf(double u) const {
  if (u <= 0.0) return eta_tail_integral(params_.left(), -u) / c2_;
  return 1.0 - eta_tail_integral(params_.right(), u) / c2_;
}

double BiasDistribution::outside_mass() const { return cdf(nodes_.front()) + 1.0 - cdf(nodes_.back()); }

double BiasDistribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
  p = std::clamp(p, cdf_values_.front(), cdf_values_.back());
  return quantile_->curve(p);
}

double bias_moment(const TsdParams& params, int n) {
  if (n < 1) throw std::invalid_argument("bias moment order must be >= 1");
  return cumulant_closed_form(params, n + 2) / ((n + 1) * cumulant_closed_form(params, 2));
}

namespace {

double weighted_eta_integral(const TsdParams& params, const std::function<double(double)>& w) {
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (int side : {1, -1}) {
    const Tail& t = side > 0 ? params.right() : params.left();
    auto f = [&](double a) { return w(side * a) * eta_tail(t, a); };
    // Split at the tempering scale so the adaptive rule resolves the bulk.
    const double knee = 1.0 / t.lambda;
    total += integrate(f, 0.0, knee, 1e-12).value;
    total += integrate(f, knee, inf, 1e-12).value;
  }
  return total;
}

}  // namespace

double bias_moment_quadrature(const TsdParams& params, int n) {
  if (n < 1) throw std::invalid_argument("bias moment order must be >= 1");
  auto w = [n](double u) { return std::pow(u, n); };
  return weighted_eta_integral(params, w) / cumulant_closed_form(params, 2);
}

SampleBatch sample_bias(const TsdParams& params, std::size_t size, RngStream& rng) {
  const BiasDistribution law(params);
  SampleBatch batch;
  batch.law = "bias";
  batch.seed = rng.seed();
  batch.stream_id = rng.stream_id();
  batch.values.reserve(size);
  for (std::size_t i = 0; i < size; ++i) batch.values.push_back(law.draw(rng));
  return batch;
}

double mean_abs_bias(const TsdParams& params) {
  return std::abs(cumulant_closed_form(params, 3)) / (2.0 * cumulant_closed_form(params, 2));
}

double mean_abs_bias_quadrature(const TsdParams& params) {
  auto w = [](double u) { return std::abs(u); };
  return weighted_eta_integral(params, w) / cumulant_closed_form(params, 2);
}

}  // namespace tsd
