#include "tsd/bounds.hpp"
#include "tsd/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

TEST_CASE("CPD bound: doubling n multiplies it by 2^{-1/5}") {
  const auto p = bgd(1, 1, 1, 2);
  for (int n : {1, 8, 100}) CHECK(bound_cpd(p, 2 * n, 1.0) / bound_cpd(p, n, 1.0) == doctest::Approx(std::pow(2.0, -0.2)));
  // C1 = 1/2, C2 = 5/4 for BGD(1,1,1,2).
  CHECK(bound_cpd(p, 1, 1.0) == doctest::Approx(std::pow(0.5 + 1.25, 0.4)));
}

TEST_CASE("M(alpha): closed form, monotonicity and divergence") {
  double prev = 0.0;
  for (double a : {0.1, 0.2, 0.25, 0.3, 0.4}) {
    const double m = M_alpha(a);
    CHECK(m == doctest::Approx(M_alpha_closed_form(a)).epsilon(1e-6));
    CHECK(m > prev);
    prev = m;
  }
  // Γ(-1.5)(2^{1.5} - 2) with Γ(-1.5) = 4√π/3.
  CHECK(M_alpha(0.25) == doctest::Approx(4 * std::sqrt(M_PI) / 3 * (std::pow(2.0, 1.5) - 2)).epsilon(1e-9));
  CHECK_THROWS_AS(M_alpha(0.5), DivergenceError);
  CHECK_THROWS_AS(M_alpha(0.6), DivergenceError);
}

TEST_CASE("stable bound") {
  const TsdParams p(1, 0.3, 0.2, 1, 0.3, 0.1);
  CHECK(bound_stable(p, 1, 1) == doctest::Approx(std::pow(0.2, 0.8) + std::pow(0.1, 0.8)));
  const TsdParams half(1, 0.3, 0.1, 1, 0.3, 0.05);
  CHECK(bound_stable(half, 1, 1) / bound_stable(p, 1, 1) == doctest::Approx(std::pow(2.0, -0.8)));
  CHECK_THROWS_AS(bound_stable(TsdParams(1, 0.3, 1, 1, 0.5, 1), 1, 1), std::invalid_argument);
}

TEST_CASE("two-TSD smooth bound") {
  const auto a = bgd(1, 1, 1, 2);
  CHECK(bound_h3_two_tsd(a, a) == 0.0);
  // |1/2 - 0| + ½|5/4 - 2| + (1/6)·2·|1.75/1.25 - 0|.
  CHECK(bound_h3_two_tsd(a, bgd(1, 1, 1, 1)) == doctest::Approx(0.5 + 0.375 + 7.0 / 15));
  // Cumulant-matched but different laws: the bound is blind to the difference.
  CHECK(bound_h3_two_tsd(svgd(1, std::sqrt(2.0)), svgd(4, 2 * std::sqrt(2.0))) == doctest::Approx(0.0));
  for (const auto& p : default_grid()) CHECK(bound_h3_two_tsd(p, a) >= 0.0);
}

TEST_CASE("normal and variance-gamma examples") {
  CHECK(bound_normal_example(bgd(1, 1, 1, 1), 1.0) == doctest::Approx(0.5));
  for (double m : {1.0, 10.0, 1e4})
    CHECK(bound_normal_example(svgd(m, std::sqrt(2 * m) / 1.5), 1.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bound_vg_example(bgd(1, 1, 1, 2), 1, 1, 2) == doctest::Approx(0.0));
  const TsdParams p(1, 0.3, 1, 2, 0.2, 3);
  CHECK(bound_vg_example(p, 1, 1, 2) == doctest::Approx(bound_h3_two_tsd(p, vgd(1, 1, 2))));
}

TEST_CASE("continuity neighbours approach the target at rate 1/k") {
  const TsdParams t(1, 0.3, 1, 1.5, 0.2, 2);
  const auto q = continuity_neighbour(t, 0.25);
  CHECK(q.m1() - t.m1() == doctest::Approx(0.25));
  CHECK(q.lambda2() - t.lambda2() == doctest::Approx(0.25));
  CHECK(std::abs(q.alpha1() - t.alpha1()) == doctest::Approx(0.125));
  // α close to 1 moves down instead.
  const auto r = continuity_neighbour(TsdParams(1, 0.9, 1, 1, 0.9, 1), 1.0);
  CHECK(r.alpha1() == doctest::Approx(0.4));
}

TEST_CASE("cumulant gap and h3 pair selection") {
  CHECK(cumulant_gap_at_least(bgd(1, 1, 1, 2), bgd(1, 1, 1, 1), 0.1));
  CHECK_FALSE(cumulant_gap_at_least(svgd(1, std::sqrt(2.0)), svgd(4, 2 * std::sqrt(2.0)), 0.1));
  const auto sel = default_h3_pairs();
  CHECK(sel.pairs.size() == 10);
  for (const auto& [a, b] : sel.pairs) CHECK(cumulant_gap_at_least(a, b, 0.1));
}

TEST_CASE("log-log slope of an exact power law") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.2));
  const auto [slope, se] = loglog_slope(x, y);
  CHECK(slope == doctest::Approx(-0.2));
  CHECK(se < 1e-12);
}

TEST_CASE("theorem names round-trip") {
  for (auto t : {Theorem::cpd, Theorem::stable, Theorem::continuity, Theorem::h3}) CHECK(theorem_from_string(to_string(t)) == t);
  CHECK_THROWS(theorem_from_string("nope"));
}

TEST_CASE("smoothing constant is finite for a bilateral gamma law") {
  const double c0 = smoothing_constant(bgd(1, 1, 1, 2));
  CHECK(c0 > 0.5);
  CHECK(c0 < 2.0);
}
