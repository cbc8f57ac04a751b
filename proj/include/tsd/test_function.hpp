#pragma once

#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tsd {

/// Fourier description of a real function g, used to take expectations
/// E g(a + X) straight from the characteristic function of X:
///
///   g(y) = Re Σ_k A_k e^{iω_k y} + (1/2π) ∫ ĝ(z) e^{izy} dz,   ĝ(z) = ∫ e^{-izx} g(x) dx.
///
/// `strip` is the half-width of the horizontal strip where ĝ is analytic and
/// `cutoff` the frequency beyond which ∫|ĝ| is negligible (below 1e-15).
struct Spectrum {
  std::vector<std::pair<double, complex>> atoms;
  std::function<complex(double)> density;
  double strip = 0.0;
  double cutoff = 0.0;

  bool has_density() const { return static_cast<bool>(density); }
};

/// A test function h with analytic derivatives up to order 3 and declared sup norms.
class TestFunction {
 public:
  using Derivatives = std::array<RealFn, 4>;

  TestFunction(std::string id, Derivatives derivatives, std::array<double, 4> sup_norms,
               std::optional<Spectrum> spectrum_h = {}, std::optional<Spectrum> spectrum_dh = {});

  const std::string& id() const { return id_; }
  double operator()(double x) const { return d_[0](x); }
  /// h^{(k)}(x) for k ≤ 3.
  double derivative(int k, double x) const { return d_.at(static_cast<std::size_t>(k))(x); }
  const RealFn& fn(int k) const { return d_.at(static_cast<std::size_t>(k)); }
  /// Declared ‖h^{(k)}‖_∞ (infinity when unbounded).
  double sup_norm(int k) const { return norms_.at(static_cast<std::size_t>(k)); }

  /// Spectrum of h, when h has one.
  const std::optional<Spectrum>& spectrum() const { return spectrum_h_; }
  /// Spectrum of h′; every function used by the Stein solver has one.
  const std::optional<Spectrum>& derivative_spectrum() const { return spectrum_dh_; }

  /// Same function multiplied by `factor` (norms and spectra scale along).
  TestFunction scaled(double factor, std::string id) const;

 private:
  std::string id_;
  Derivatives d_;
  std::array<double, 4> norms_;
  std::optional<Spectrum> spectrum_h_;
  std::optional<Spectrum> spectrum_dh_;
};

/// Builds a test function from its identifier:
///   "tanh", "tanh_half", "xexp" (x e^{-x²/2}/3), "xexp_raw" (x e^{-x²/2}),
///   "sin:<ω>[:<φ>]" (sin(ωx+φ)/max(1,ω,ω²,ω³)), "sin_raw:<ω>[:<φ>]",
///   "gauss" (e^{-x²/2}), "sin_gauss" (sin(x) e^{-x²/4}), "linear" (x), "const".
/// Unknown identifiers throw std::invalid_argument.
TestFunction make_test_function(const std::string& id);

/// tanh, sin(ωx)/max(1,ω,ω²,ω³) for ω ∈ {0.5, 1, 2, 4}, and x e^{-x²/2}/3.
std::vector<TestFunction> stein_dictionary();

/// sin(ωx+φ)/max(1,ω,ω²,ω³) for ω ∈ {0.25, 0.5, 1, 2, 4}, φ ∈ {0, π/2}, and tanh/2.
/// Every member has ‖h^{(k)}‖ ≤ 1 for k = 0..3.
std::vector<TestFunction> smooth_dictionary();

struct NormCheck {
  std::array<double, 4> observed{};
  /// max_k (observed_k - declared_k); ≤ 1e-8 means the declaration holds.
  double worst_excess = 0.0;
  bool passed = false;
};

/// Samples h^{(k)} on `points` equally spaced points of [-half_width, half_width].
NormCheck check_sup_norms(const TestFunction& h, int points = 10000, double half_width = 10.0);

/// E g(a + X) from the characteristic function of X by Parseval. Atoms are summed
/// exactly; the continuous part uses the trapezoid rule on the real line, which
/// converges geometrically for integrands analytic in a strip. `cf_strip` is the
/// half-width of the strip where cf is analytic; the step shrinks as |a| grows.
QuadResult spectral_expectation(const Spectrum& spectrum, const std::function<complex(double)>& cf,
                                double a, double cf_strip);

}  // namespace tsd
