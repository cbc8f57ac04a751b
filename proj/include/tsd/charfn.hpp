#pragma once

#include "tsd/model.hpp"
#include "tsd/special.hpp"

#include <optional>
#include <string>
#include <variant>

namespace tsd {

/// Log-characteristic function of one tempered tail,
/// ∫_0^∞ (e^{izu} - 1) m u^{-1-α} e^{-λu} du, on the principal branch.
complex tail_exponent(const Tail& tail, double z);

/// ψ(z) = log φ_ts(z), built from both tails.
complex tempered_exponent(const TsdParams& params, double z);

/// ψ with the per-tail constants m Γ(1-α) λ^α computed once; use in loops.
class TemperedExponent {
 public:
  explicit TemperedExponent(const TsdParams& params);
  complex operator()(double z) const;

 private:
  struct Side {
    double scale;
    double alpha;
    double lambda;
  };
  static Side make_side(const Tail& tail);
  static complex side_value(const Side& side, double z);

  Side right_;
  Side left_;
};

/// log E e^{θY} for one tail; +infinity when θ ≥ λ.
double tail_log_mgf(const Tail& tail, double theta);

/// log E e^{θX}, finite for -λ₂ < θ < λ₁.
double tempered_log_mgf(const TsdParams& params, double theta);

/// Direct quadrature of ∫ (e^{izu} - 1) ν_ts(du); oracle for the closed form.
complex tempered_exponent_quadrature(const TsdParams& params, double z, double tol = 1e-10);

complex cf_tempered(const TsdParams& params, double z);
complex cf_stable(const StableParams& params, double z);
complex cf_compound_poisson(const TsdParams& params, int n, double z);
complex cf_svgd(double m, double lambda, double z);
complex cf_ratio(const TsdParams& params, double t, double z);
complex cf_normal(double sigma, double z);

enum class CfKind { tempered, stable, compound_poisson, svgd, ratio, normal };

std::string to_string(CfKind kind);

/// A characteristic function z ↦ φ(z) together with the law it belongs to.
class CharFn {
 public:
  static CharFn tempered(const TsdParams& params);
  static CharFn stable(const StableParams& params);
  static CharFn compound_poisson(const TsdParams& params, int n);
  static CharFn svgd(double m, double lambda);
  static CharFn ratio(const TsdParams& params, double t);
  static CharFn normal(double sigma);

  complex operator()(double z) const;
  CfKind kind() const { return kind_; }

  /// log E e^{θX}; +infinity outside the domain of the moment generating function
  /// (everywhere except θ = 0 for the stable kind).
  double log_mgf(double theta) const;

  /// The compound-Poisson size n, or the ratio time t; zero for other kinds.
  double index() const { return index_; }
  const TsdParams* tsd_params() const;
  const StableParams* stable_params() const;
  /// ψ_ts(z) of the underlying TSD (tempered, compound-Poisson and ratio kinds).
  complex tsd_exponent(double z) const;

 private:
  struct Svgd {
    double m;
    double lambda;
  };
  using Source = std::variant<TsdParams, StableParams, Svgd, double>;

  CharFn(CfKind kind, Source source, double index);

  CfKind kind_;
  Source source_;
  double index_ = 0.0;
  std::optional<TemperedExponent> psi_;
};

}  // namespace tsd
