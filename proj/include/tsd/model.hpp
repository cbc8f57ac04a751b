#pragma once

#include <string>
#include <vector>

namespace tsd {

/// One tail of a tempered stable Lévy measure: m u^{-1-alpha} e^{-lambda u} on u > 0.
struct Tail {
  double m = 1.0;
  double alpha = 0.0;
  double lambda = 1.0;

  friend bool operator==(const Tail&, const Tail&) = default;
};

enum class SubFamily { tsd, kobol, cgmy, bgd, vgd, svgd };

std::string to_string(SubFamily family);

/// TSD(m1, alpha1, lambda1, m2, alpha2, lambda2). The right tail carries index 1.
class TsdParams {
 public:
  TsdParams(double m1, double alpha1, double lambda1, double m2, double alpha2, double lambda2);
  TsdParams(Tail right, Tail left);

  double m1() const { return right_.m; }
  double alpha1() const { return right_.alpha; }
  double lambda1() const { return right_.lambda; }
  double m2() const { return left_.m; }
  double alpha2() const { return left_.alpha; }
  double lambda2() const { return left_.lambda; }

  const Tail& right() const { return right_; }
  const Tail& left() const { return left_; }

  /// Most specific member of the nested family chain.
  SubFamily family() const;
  bool is_kobol() const { return right_.alpha == left_.alpha; }
  bool is_cgmy() const { return is_kobol() && right_.m == left_.m; }
  bool is_bgd() const { return right_.alpha == 0.0 && left_.alpha == 0.0; }
  bool is_vgd() const { return is_bgd() && right_.m == left_.m; }
  bool is_svgd() const { return is_vgd() && right_.lambda == left_.lambda; }
  bool is_symmetric() const;

  /// The same law with both intensities divided by n (one n-th convolution root).
  TsdParams scaled_intensity(double factor) const;

  std::vector<double> as_vector() const;
  friend bool operator==(const TsdParams&, const TsdParams&) = default;

 private:
  Tail right_;
  Tail left_;
};

/// Bilateral gamma BGD(m1, lambda1, m2, lambda2).
TsdParams bgd(double m1, double lambda1, double m2, double lambda2);
/// Variance gamma VGD(m, lambda1, lambda2).
TsdParams vgd(double m, double lambda1, double lambda2);
/// Symmetric variance gamma SVGD(m, lambda).
TsdParams svgd(double m, double lambda);

/// S(m1, m2, alpha): the untempered limit of KoBol laws.
class StableParams {
 public:
  StableParams(double m1, double m2, double alpha);
  double m1() const { return m1_; }
  double m2() const { return m2_; }
  double alpha() const { return alpha_; }

 private:
  double m1_;
  double m2_;
  double alpha_;
};

/// Lévy density ν(u); u = 0 is a domain error.
double levy_density(const TsdParams& params, double u);
double levy_density(const StableParams& params, double u);

/// Tempering factor q(u) = ν_ts(u) / ν_α(u) for KoBol parameters.
double tempering(const TsdParams& params, double u);

enum class CumulantSource { closed_form, quadrature };

struct CumulantVector {
  std::vector<double> values;  // values[k] is C_{k+1}
  CumulantSource source = CumulantSource::closed_form;

  double operator[](int n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// C_n = Γ(n-α1) m1/λ1^{n-α1} + (-1)^n Γ(n-α2) m2/λ2^{n-α2}.
double cumulant_closed_form(const TsdParams& params, int n);

/// ∫ u^n ν(du) by singularity-aware quadrature.
double cumulant_quadrature(const TsdParams& params, int n, double tol = 1e-10);

CumulantVector cumulants(const TsdParams& params, int count = 4,
                         CumulantSource source = CumulantSource::closed_form);

/// Per-tail moment Γ(n-α) m / λ^{n-α} = ∫_0^∞ u^n m u^{-1-α} e^{-λu} du.
double tail_moment(const Tail& tail, int n);

/// b = ∫_{-1}^{1} u ν(du), the drift of the (b, 0, ν) triplet.
double drift_b(const TsdParams& params);

/// Parameter grid used by the property and acceptance suites: 27 points built from
/// m ∈ {0.5, 1, 2}, α ∈ {0, 0.3, 0.7}, λ ∈ {0.5, 1, 3} on the right tail. The left
/// tail uses cyclic shifts of the level indices, so the grid contains symmetric
/// laws (SVGD and CGMY corners) as well as asymmetric ones.
std::vector<TsdParams> default_grid();

}  // namespace tsd
