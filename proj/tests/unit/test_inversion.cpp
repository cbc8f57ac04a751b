#include "tsd/inversion.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

namespace {

// X = E1 - E2 with independent exponentials of rates a and b: BGD(1, a, 1, b).
double exp_diff_cdf(double a, double b, double x) {
  if (x < 0.0) return a / (a + b) * std::exp(b * x);
  return 1.0 - b / (a + b) * std::exp(-a * x);
}

double exp_diff_pdf(double a, double b, double x) {
  return a * b / (a + b) * (x < 0.0 ? std::exp(b * x) : std::exp(-a * x));
}

}  // namespace

TEST_CASE("inverted CDF and density of a difference of exponentials") {
  const double a = 1.0, b = 2.0;
  const auto law = make_law(CharFn::tempered(bgd(1, a, 1, b)));
  for (double x : {-4.0, -1.0, -0.2, 0.3, 1.0, 5.0}) {
    CHECK(std::abs(law.cdf(x) - exp_diff_cdf(a, b, x)) < 1e-8);
    CHECK(std::abs(law.pdf(x) - exp_diff_pdf(a, b, x)) < 1e-7);
  }
}

TEST_CASE("normal law by inversion matches erfc") {
  const auto law = make_law(CharFn::normal(1.5));
  for (double x : {-4.0, -1.0, 0.0, 0.7, 3.0})
    CHECK(std::abs(law.cdf(x) - 0.5 * std::erfc(-x / (1.5 * std::sqrt(2.0)))) < 1e-9);
}

TEST_CASE("compound Poisson law carries the atom exp(-n) at zero") {
  const int n = 2;
  const auto law = make_law(CharFn::compound_poisson(bgd(1, 1, 1, 2), n));
  REQUIRE(law.has_atoms());
  CHECK(law.atom_mass() == doctest::Approx(std::exp(-n)).epsilon(1e-12));
  CHECK(law.cdf(0.0) - law.cdf_left(0.0) == doctest::Approx(std::exp(-n)).epsilon(1e-6));
}

TEST_CASE("stable tail series agrees with Fourier inversion") {
  for (const StableParams s : {StableParams(1, 1, 0.3), StableParams(1, 1, 0.5), StableParams(2, 0.5, 0.7)}) {
    const auto law = make_law(CharFn::stable(s));
    const auto cf = CharFn::stable(s);
    for (double x : {20.0, 60.0}) {
      const double series = stable_upper_tail_series(s, x);
      const double inverted = 1.0 - invert_cdf(cf, x, {1e-12, 1e-12});
      CHECK(std::abs(series - inverted) < 1e-9 * std::max(1.0, 1.0 / series) * series + 1e-11);
      CHECK(stable_density_series(s, x) == doctest::Approx(invert_pdf(cf, x, {1e-12, 1e-13})).epsilon(1e-6));
    }
  }
}

TEST_CASE("CDF is monotone and expect() integrates moments") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const auto law = make_law(CharFn::tempered(p));
  double prev = 0.0;
  for (double x = law.lo(); x <= law.hi(); x += (law.hi() - law.lo()) / 50) {
    const double f = law.cdf(x);
    CHECK(f >= prev - 1e-9);
    prev = f;
  }
  const double mean = law.expect([](double x) { return x; }, [](double) { return 1.0; });
  CHECK(mean == doctest::Approx(cumulant_closed_form(p, 1)).epsilon(1e-7));
  const double c1 = cumulant_closed_form(p, 1);
  const double var = law.expect([&](double x) { return (x - c1) * (x - c1); }, [&](double x) { return 2 * (x - c1); });
  CHECK(var == doctest::Approx(cumulant_closed_form(p, 2)).epsilon(1e-7));
}

TEST_CASE("Chernoff bounds dominate the tails") {
  const auto law = make_law(CharFn::tempered(bgd(1, 1, 1, 2)));
  for (double x : {3.0, 6.0}) {
    CHECK(law.upper_tail_bound(x) >= 1.0 - exp_diff_cdf(1, 2, x));
    CHECK(law.lower_tail_bound(-x) >= exp_diff_cdf(1, 2, -x));
  }
}

TEST_CASE("law of X_(t) interpolates between a point mass and the target") {
  const auto p = bgd(1, 1, 1, 2);
  // φ_t(z) = φ(z)/φ(e^{-t} z): large t recovers the target law.
  const auto far = law_of_Xt(p, 30.0);
  const auto target = make_law(CharFn::tempered(p));
  for (double x : {-1.0, 0.5, 2.0}) CHECK(std::abs(far.cdf(x) - target.cdf(x)) < 1e-8);
  const auto near = law_of_Xt(p, 1e-3);
  CHECK(near.cdf(0.3) > 0.99);
  CHECK(near.cdf(-0.3) < 0.01);
}
