#include "tsd/sampling.hpp"

#include "tsd/errors.hpp"
#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tsd {

namespace {

constexpr double kMinAcceptance = 1e-4;
constexpr double kDefaultEps = 1e-3;

// -m Γ(-α) λ^α, so that one rejection step accepts with probability e^{-load}.
double tilt_load(const Tail& t) {
  return -t.m * gamma_fn(-t.alpha) * std::pow(t.lambda, t.alpha);
}

// ∫_a^b m u^{-1-α} e^{-λu} du through u = e^v.
double levy_mass(const Tail& t, double a, double b) {
  auto f = [&t](double v) {
    const double u = std::exp(v);
    return t.m * std::pow(u, -t.alpha) * std::exp(-t.lambda * u);
  };
  const double hi = std::isfinite(b) ? std::log(b) : std::log(a + 60.0 / t.lambda);
  if (hi <= std::log(a)) return 0.0;
  return integrate(f, std::log(a), hi, 1e-12).value;
}

std::string describe(const TsdParams& p) {
  std::ostringstream out;
  out << "TSD(" << p.m1() << "," << p.alpha1() << "," << p.lambda1() << "," << p.m2() << ","
      << p.alpha2() << "," << p.lambda2() << ")";
  return out.str();
}

}  // namespace

double draw_positive_stable(double alpha, RngStream& rng) {
  const double u = M_PI * rng.uniform();
  const double e = rng.exponential();
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return a * b;
}

TailSampler::TailSampler(const Tail& tail, int max_pieces) : tail_(tail) {
  if (tail.alpha == 0.0) {
    method_ = TailMethod::gamma;
    return;
  }
  const double load = tilt_load(tail);
  pieces_ = std::max(1, static_cast<int>(std::ceil(load)));
  if (pieces_ > max_pieces) {
    setup_truncation(kDefaultEps);
    return;
  }
  method_ = TailMethod::tilted_stable;
  const double piece_m = tail.m / pieces_;
  const double c = -piece_m * gamma_fn(-tail.alpha);
  piece_scale_ = std::pow(c, 1.0 / tail.alpha);
  acceptance_ = std::exp(-load / pieces_);
}

TailSampler::TailSampler(const Tail& tail, double eps) : tail_(tail) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation level must be positive");
  setup_truncation(eps);
}

void TailSampler::setup_truncation(double eps) {
  method_ = TailMethod::truncated_jumps;
  pieces_ = 1;
  eps_ = eps;
  split_ = std::max(eps, 1.0 / tail_.lambda);
  const double near = levy_mass(tail_, eps, split_);
  const double far = levy_mass(tail_, split_, std::numeric_limits<double>::infinity());
  rate_ = near + far;
  if (rate_ < 1e-6) {
    std::ostringstream msg;
    msg << "jump rate above eps = " << eps << " is " << rate_ << ", below 1e-6";
    throw NumericalError(msg.str(), rate_);
  }
  near_weight_ = near / rate_;
  auto u1 = [](double u) { return u; };
  auto u2 = [](double u) { return u * u; };
  drift_ = integrate_levy_tail(u1, tail_.m, tail_.alpha, tail_.lambda, eps, 1e-10, 1.0).value;
  bias_ = integrate_levy_tail(u2, tail_.m, tail_.alpha, tail_.lambda, eps, 1e-10, 2.0).value;
}

double TailSampler::draw(RngStream& rng) const {
  switch (method_) {
    case TailMethod::gamma: return rng.gamma(tail_.m, tail_.lambda);
    case TailMethod::tilted_stable: {
      double sum = 0.0;
      for (int k = 0; k < pieces_; ++k) sum += draw_tilted(rng);
      return sum;
    }
    case TailMethod::truncated_jumps: return draw_truncated(rng);
  }
  return 0.0;
}

double TailSampler::draw_tilted(RngStream& rng) const {
  for (;;) {
    const double s = piece_scale_ * draw_positive_stable(tail_.alpha, rng);
    if (rng.uniform() <= std::exp(-tail_.lambda * s)) return s;
  }
}

double TailSampler::draw_jump(RngStream& rng) const {
  const double a = tail_.alpha;
  const double lam = tail_.lambda;
  if (rng.uniform() < near_weight_) {
    // Proposal ∝ u^{-1-α} on (eps, split), thinned by e^{-λ(u - eps)}.
    for (;;) {
      const double v = rng.uniform();
      double u;
      if (a == 0.0) {
        u = eps_ * std::pow(split_ / eps_, v);
      } else {
        const double lo = std::pow(eps_, -a);
        const double hi = std::pow(split_, -a);
        u = std::pow(lo - v * (lo - hi), -1.0 / a);
      }
      if (rng.uniform() <= std::exp(-lam * (u - eps_))) return u;
    }
  }
  // Proposal split + Exp(λ), thinned by (split/u)^{1+α}.
  for (;;) {
    const double u = split_ + rng.exponential() / lam;
    if (rng.uniform() <= std::pow(split_ / u, 1.0 + a)) return u;
  }
}

double TailSampler::draw_truncated(RngStream& rng) const {
  const auto jumps = rng.poisson(rate_);
  double sum = drift_;
  for (std::uint64_t k = 0; k < jumps; ++k) sum += draw_jump(rng);
  return sum;
}

TsdSampler::TsdSampler(const TsdParams& params) : right_(params.right()), left_(params.left()) {}

TsdSampler::TsdSampler(const TsdParams& params, double eps)
    : right_(params.right(), eps), left_(params.left(), eps) {}

double TsdSampler::draw(RngStream& rng) const {
  const double up = right_.draw(rng);
  const double down = left_.draw(rng);
  return up - down;
}

CpdSampler::CpdSampler(const TsdParams& params, int n)
    : n_(n), jump_(params.scaled_intensity(1.0 / std::max(n, 1))) {
  if (n < 1) throw std::invalid_argument("compound Poisson size must be >= 1");
}

double CpdSampler::draw(RngStream& rng) const {
  const auto count = rng.poisson(static_cast<double>(n_));
  double sum = 0.0;
  for (std::uint64_t k = 0; k < count; ++k) sum += jump_.draw(rng);
  return sum;
}

namespace {

template <class Sampler>
SampleBatch fill(const Sampler& sampler, std::size_t size, RngStream& rng, std::string law) {
  SampleBatch batch;
  batch.law = std::move(law);
  batch.seed = rng.seed();
  batch.stream_id = rng.stream_id();
  batch.values.reserve(size);
  for (std::size_t i = 0; i < size; ++i) batch.values.push_back(sampler.draw(rng));
  return batch;
}

}  // namespace

SampleBatch sample_bgd(const TsdParams& params, std::size_t size, RngStream& rng) {
  if (!params.is_bgd()) throw std::invalid_argument("sample_bgd needs alpha1 = alpha2 = 0");
  return fill(TsdSampler(params), size, rng, "BGD " + describe(params));
}

SampleBatch sample_tempered_onesided(double m, double alpha, double lambda, std::size_t size,
                                     RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("one-sided sampler needs alpha in (0, 1)");
  const Tail tail{m, alpha, lambda};
  if (!(m > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("m and lambda must be positive");
  const double acceptance = std::exp(-tilt_load(tail));
  if (acceptance < kMinAcceptance) {
    std::ostringstream msg;
    msg << "tilted-stable acceptance " << acceptance << " is below 1e-4; use sample_truncation";
    throw NumericalError(msg.str(), acceptance);
  }
  // One rejection step on the whole law, no splitting.
  SampleBatch batch;
  batch.law = "one-sided TS";
  batch.seed = rng.seed();
  batch.stream_id = rng.stream_id();
  batch.values.reserve(size);
  const double scale = std::pow(-m * gamma_fn(-alpha), 1.0 / alpha);
  for (std::size_t i = 0; i < size; ++i) {
    for (;;) {
      const double s = scale * draw_positive_stable(alpha, rng);
      if (rng.uniform() <= std::exp(-lambda * s)) {
        batch.values.push_back(s);
        break;
      }
    }
  }
  return batch;
}

SampleBatch sample_tempered(const TsdParams& params, std::size_t size, RngStream& rng) {
  const TsdSampler sampler(params);
  auto batch = fill(sampler, size, rng, describe(params));
  batch.truncation_bias = sampler.truncation_bias();
  return batch;
}

SampleBatch sample_truncation(const TsdParams& params, double eps, std::size_t size, RngStream& rng) {
  const TsdSampler sampler(params, eps);
  auto batch = fill(sampler, size, rng, "truncated " + describe(params));
  batch.truncation_bias = sampler.truncation_bias();
  return batch;
}

SampleBatch sample_cpd_approximant(const TsdParams& params, int n, std::size_t size, RngStream& rng) {
  const CpdSampler sampler(params, n);
  return fill(sampler, size, rng, "CPD n=" + std::to_string(n) + " of " + describe(params));
}

}  // namespace tsd
