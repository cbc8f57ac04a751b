#include "tsd/model.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace tsd;

namespace {

// Bilateral gamma cumulants by direct differentiation of the log cf:
// C_n = (n-1)! (m1/λ1^n + (-1)^n m2/λ2^n).
double bgd_cumulant(double m1, double l1, double m2, double l2, int n) {
  const double fact = std::tgamma(n);
  return fact * (m1 / std::pow(l1, n) + ((n % 2 == 0) ? 1.0 : -1.0) * m2 / std::pow(l2, n));
}

}  // namespace

TEST_CASE("bilateral gamma cumulants match the gamma-law formula") {
  for (int n = 1; n <= 4; ++n) {
    CHECK(cumulant_closed_form(bgd(1, 1, 1, 2), n) == doctest::Approx(bgd_cumulant(1, 1, 1, 2, n)).epsilon(1e-14));
    CHECK(cumulant_closed_form(bgd(0.5, 3, 2, 0.5), n) ==
          doctest::Approx(bgd_cumulant(0.5, 3, 2, 0.5, n)).epsilon(1e-14));
  }
  // BGD(1,1,1,2): C1 = 1 - 1/2, C2 = 1 + 1/4, C3 = 2(1 - 1/8).
  CHECK(cumulant_closed_form(bgd(1, 1, 1, 2), 1) == doctest::Approx(0.5));
  CHECK(cumulant_closed_form(bgd(1, 1, 1, 2), 2) == doctest::Approx(1.25));
  CHECK(cumulant_closed_form(bgd(1, 1, 1, 2), 3) == doctest::Approx(1.75));
}

TEST_CASE("quadrature cumulants agree with closed forms on the grid") {
  for (const auto& p : default_grid())
    for (int n = 1; n <= 4; ++n) {
      const double c = cumulant_closed_form(p, n);
      CHECK(std::abs(cumulant_quadrature(p, n) - c) <= 1e-10 * std::max(1.0, std::abs(c)));
    }
}

TEST_CASE("symmetric laws have vanishing odd cumulants") {
  const TsdParams p(1.3, 0.4, 2.0, 1.3, 0.4, 2.0);
  CHECK(std::abs(cumulant_closed_form(p, 1)) < 1e-15);
  CHECK(std::abs(cumulant_closed_form(p, 3)) < 1e-15);
  CHECK(cumulant_closed_form(p, 2) > 0.0);
}

TEST_CASE("sub-family classification") {
  CHECK(TsdParams(1, 0.3, 1, 2, 0.5, 1).family() == SubFamily::tsd);
  CHECK(TsdParams(1, 0.3, 1, 2, 0.3, 1).family() == SubFamily::kobol);
  CHECK(TsdParams(1, 0.3, 1, 1, 0.3, 2).family() == SubFamily::cgmy);
  CHECK(bgd(1, 1, 2, 2).family() == SubFamily::bgd);
  CHECK(bgd(1, 1, 1, 2).family() == SubFamily::vgd);
  CHECK(svgd(1, 2).family() == SubFamily::svgd);
  CHECK(vgd(2, 1, 3) == bgd(2, 1, 2, 3));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(TsdParams(-1, 0.3, 1, 1, 0.3, 1), std::invalid_argument);
  CHECK_THROWS_AS(TsdParams(1, 1.0, 1, 1, 0.3, 1), std::invalid_argument);
  CHECK_THROWS_AS(TsdParams(1, -0.1, 1, 1, 0.3, 1), std::invalid_argument);
  CHECK_THROWS_AS(TsdParams(1, 0.3, 0, 1, 0.3, 1), std::invalid_argument);
  CHECK_THROWS_AS(cumulant_closed_form(bgd(1, 1, 1, 1), 0), std::invalid_argument);
}

TEST_CASE("scaling the intensity scales every cumulant") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const auto q = p.scaled_intensity(0.25);
  for (int n = 1; n <= 4; ++n)
    CHECK(cumulant_closed_form(q, n) == doctest::Approx(0.25 * cumulant_closed_form(p, n)).epsilon(1e-14));
}

TEST_CASE("Levy density is the tempered power law on each side") {
  const TsdParams p(2, 0.3, 1.5, 0.5, 0.7, 0.5);
  CHECK(levy_density(p, 0.7) == doctest::Approx(2 * std::pow(0.7, -1.3) * std::exp(-1.05)));
  CHECK(levy_density(p, -0.7) == doctest::Approx(0.5 * std::pow(0.7, -1.7) * std::exp(-0.35)));
  CHECK_THROWS(levy_density(p, 0.0));
}

TEST_CASE("default grid has 27 points including symmetric laws") {
  const auto grid = default_grid();
  CHECK(grid.size() == 27);
  int symmetric = 0;
  for (const auto& p : grid) symmetric += p.is_symmetric();
  CHECK(symmetric > 0);
  CHECK(symmetric < 27);
}
