#pragma once

#include "tsd/distance.hpp"
#include "tsd/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tsd {

/// c (|C₁| + |C₂|)^{2/5} n^{-1/5}.
double bound_cpd(const TsdParams& params, int n, double c);

/// M(α) = ∫_0^∞ ((e^{-u} - 1)/u^{1+α})² du by quadrature. The integrand behaves like
/// u^{-2α} at the origin, so α ≥ 1/2 raises DivergenceError.
double M_alpha(double alpha);
/// Γ(-(1+2α)) (2^{1+2α} - 2), valid for α ∈ (0, 1/2).
double M_alpha_closed_form(double alpha);

/// C₁ λ₁^{α+1/2} + C₂ λ₂^{α+1/2}; KoBol parameters with α ∈ (0, 1) only.
double bound_stable(const TsdParams& params, double c1, double c2);

/// |C₁(A) - C₁(B)| + ½|C₂(A) - C₂(B)| + (1/6) C₂(B) | |C₃(A)|/C₂(A) - |C₃(B)|/C₂(B) |,
/// with B the reference law.
double bound_h3_two_tsd(const TsdParams& a, const TsdParams& b);

/// |C₁| + ½|C₂ - λ²| + (1/6) λ² |C₃|/C₂: distance to N(0, λ²).
double bound_normal_example(const TsdParams& params, double lam);

/// bound_h3_two_tsd against VGD(m, λ₁, λ₂), written with the VG cumulants
/// m(1/λ₁ - 1/λ₂), m(1/λ₁² + 1/λ₂²), 2m(1/λ₁³ - 1/λ₂³).
double bound_vg_example(const TsdParams& params, double m, double lam1, double lam2);

/// max over 0 < |z| ≤ z_max of |φ(z)| ∫_0^{|z|} ds/|φ(s)| / |z|: the constant c₀ of the
/// smoothing inequality with p = 1, checked on a grid of `points` points.
double smoothing_constant(const TsdParams& params, double z_max = 50.0, int points = 2000);

/// Parameters at distance `step` from `target` in every coordinate: m and λ move up
/// by `step`, α moves by step/2 (up when that stays below 1, otherwise down).
TsdParams continuity_neighbour(const TsdParams& target, double step);

/// Cumulant-matched pairs make bound_h3_two_tsd uninformative; a pair qualifies for
/// the consistency check when max_j |C_j(A) - C_j(B)| over j ≤ 3 is at least `gap`.
bool cumulant_gap_at_least(const TsdParams& a, const TsdParams& b, double gap);

enum class Theorem { cpd, stable, continuity, h3 };

std::string to_string(Theorem theorem);
Theorem theorem_from_string(const std::string& name);

struct SweepSpec {
  Theorem theorem = Theorem::cpd;
  /// Target law (cpd, continuity); stable sweeps take m₁, m₂, α from it.
  TsdParams target = bgd(1.0, 1.0, 1.0, 2.0);
  /// n for cpd, λ for stable, k for continuity.
  std::vector<double> values;
  /// (A, B) pairs for h3; B is the reference law.
  std::vector<std::pair<TsdParams, TsdParams>> pairs;
};

/// The acceptance sweeps: n = 1, 2, ..., 256 for BGD(1,1,1,2); λ = 0.4 ... 0.05 with
/// α = 0.3, m₁ = m₂ = 1; k = 1, 2, ..., 16 around TSD(1, 0.3, 1, 1.5, 0.2, 2).
SweepSpec default_sweep(Theorem theorem);

/// The first ten pairs (default_grid()[i], default_grid()[(i + 13) mod 27]) with a
/// cumulant gap of at least 0.1, plus the skipped matched pairs for logging.
struct H3Pairs {
  std::vector<std::pair<TsdParams, TsdParams>> pairs;
  std::vector<std::pair<TsdParams, TsdParams>> excluded;
};
H3Pairs default_h3_pairs();

struct SweepPoint {
  double parameter = 0.0;
  std::vector<double> params;  // law A of the point
  DistanceEstimate distance;
  double bound = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
};

struct BoundReport {
  std::string theorem;
  std::string rate_form;
  std::map<std::string, double> constants;
  std::vector<SweepPoint> points;
  double slope = 0.0;
  double slope_se = 0.0;
  double slope_ci_lo = 0.0;
  double slope_ci_hi = 0.0;
  /// Verdict flags; all are recomputed from `points` by evaluate_verdicts().
  std::map<std::string, bool> verdicts;
  std::vector<std::string> notes;
  bool complete = true;
};

BoundReport rate_sweep(const SweepSpec& spec, std::uint64_t seed = 42);

/// Least-squares slope of log y on log x with its standard error.
std::pair<double, double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Recomputes slope and verdicts of a report from its stored points.
void evaluate_verdicts(BoundReport& report, const SweepSpec& spec);

}  // namespace tsd
