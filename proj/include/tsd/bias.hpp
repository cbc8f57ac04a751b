#pragma once

#include "tsd/model.hpp"
#include "tsd/rng.hpp"
#include "tsd/sampling.hpp"

#include <memory>
#include <vector>

namespace tsd {

/// η(u) = ∫_u^∞ y ν(dy) for u > 0 and ∫_{-∞}^u |y| ν(dy) for u < 0.
double eta(const TsdParams& params, double u);

/// η(u) by direct quadrature of the defining integral; oracle for eta().
double eta_quadrature(const TsdParams& params, double u);

/// Law of the bias variable Y with density f₁(u) = η(u) / C₂.
///
/// The CDF is exact (incomplete gamma pieces); the quantile is a monotone cubic
/// through the exact CDF on a grid that is refined until the trapezoid mass of f₁
/// is within 1e-6 of one.
class BiasDistribution {
 public:
  explicit BiasDistribution(const TsdParams& params);

  double pdf(double u) const;
  double cdf(double u) const;
  double quantile(double p) const;
  double draw(RngStream& rng) const { return quantile(rng.uniform()); }

  const TsdParams& params() const { return params_; }
  double variance() const { return c2_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& cdf_values() const { return cdf_values_; }
  /// Trapezoid integral of f₁ over the tabulation grid.
  double grid_mass() const { return grid_mass_; }
  /// Mass outside [nodes.front(), nodes.back()].
  double outside_mass() const;

 private:
  struct Quantile;

  TsdParams params_;
  double c2_;
  double left_mass_;  // P(Y < 0)
  std::vector<double> nodes_;
  std::vector<double> cdf_values_;
  double grid_mass_ = 0.0;
  std::shared_ptr<const Quantile> quantile_;
};

/// E Y^n = C_{n+2} / ((n + 1) C₂).
double bias_moment(const TsdParams& params, int n);

/// ∫ u^n f₁(u) du by quadrature of η.
double bias_moment_quadrature(const TsdParams& params, int n);

SampleBatch sample_bias(const TsdParams& params, std::size_t size, RngStream& rng);

/// |C₃| / (2 C₂): the closed expression used in the two-TSD smooth bound.
double mean_abs_bias(const TsdParams& params);

/// E|Y| = ∫|u| f₁(u) du by quadrature. This equals (C₃⁺ + C₃⁻)/(2C₂), with C₃± the
/// per-tail third moments, and exceeds mean_abs_bias() whenever both tails are present.
double mean_abs_bias_quadrature(const TsdParams& params);

}  // namespace tsd
