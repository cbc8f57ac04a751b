#pragma once

#include "tsd/inversion.hpp"
#include "tsd/sampling.hpp"
#include "tsd/test_function.hpp"

#include <string>
#include <vector>

namespace tsd {

enum class Metric { kolmogorov, wasserstein1, smooth_h3_lower };

std::string to_string(Metric metric);

struct DistanceEstimate {
  Metric metric = Metric::kolmogorov;
  double value = 0.0;
  double error = 0.0;
  std::string method;
  /// Where the sup was attained (Kolmogorov), or index of the best dictionary member.
  double location = 0.0;
};

struct KolmogorovOptions {
  int grid = 512;
  int refinements = 4;
  /// Local maxima of |F_A - F_B| refined in each round.
  int peaks = 3;
  /// Points inserted on each side of a refined peak per round.
  int inserts = 7;
};

/// sup_x |F_A(x) - F_B(x)| on a sinh-spaced grid over both effective supports,
/// refined around the largest local maxima. Declared atoms are grid points and are
/// evaluated from both sides. The error bar is the change of F_A - F_B across the
/// cells next to the final argmax plus both inversion tolerances.
DistanceEstimate kolmogorov(const NumericLaw& a, const NumericLaw& b, const KolmogorovOptions& opts = {});

/// Same against the empirical CDF of a batch.
DistanceEstimate kolmogorov(const NumericLaw& law, const SampleBatch& batch,
                            const KolmogorovOptions& opts = {});

/// Exact two-sample Kolmogorov-Smirnov statistic.
DistanceEstimate kolmogorov(const SampleBatch& a, const SampleBatch& b);

/// ∫ |F_a - F_b| between the two empirical laws (for equal sizes this is the mean
/// absolute difference of the sorted samples). The error bar is the standard error
/// over `splits` disjoint sub-batch pairs, scaled to the full size.
DistanceEstimate wasserstein1_empirical(const SampleBatch& a, const SampleBatch& b, int splits = 10);

/// E h(X). Functions whose spectrum is purely atomic are read off the characteristic
/// function exactly; others integrate h′ against the inverted CDF, with an error bar
/// of the inversion tolerance times ‖h′‖ times the support width.
QuadResult expectation(const NumericLaw& law, const TestFunction& h);

/// max over the dictionary of |E_A h - E_B h|: a lower bound on d_{H₃} when every
/// member has ‖h^{(k)}‖ ≤ 1 for k ≤ 3 (checked, std::invalid_argument otherwise).
DistanceEstimate smooth_h3_lower(const NumericLaw& a, const NumericLaw& b,
                                 const std::vector<TestFunction>& dict);

/// Same from sample means; the error bar is three standard errors of the winning
/// member's mean difference.
DistanceEstimate smooth_h3_lower(const SampleBatch& a, const SampleBatch& b,
                                 const std::vector<TestFunction>& dict);

/// Dvoretzky-Kiefer-Wolfowitz band sqrt(log(2/δ)/(2n)).
double dkw_band(std::size_t n, double delta);

}  // namespace tsd
