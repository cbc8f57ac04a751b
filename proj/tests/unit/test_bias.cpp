#include "tsd/bias.hpp"
#include "tsd/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

TEST_CASE("eta closed form agrees with its defining integral") {
  for (const auto& p : default_grid())
    for (double u : {-3.0, -0.4, 0.05, 0.5, 2.5})
      CHECK(eta(p, u) == doctest::Approx(eta_quadrature(p, u)).epsilon(1e-8));
}

TEST_CASE("bias moments follow the cumulant ratio") {
  for (const auto& p : default_grid())
    for (int n = 1; n <= 2; ++n)
      CHECK(std::abs(bias_moment_quadrature(p, n) - bias_moment(p, n)) < 1e-6);
}

TEST_CASE("bias law is a probability distribution") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const BiasDistribution law(p);
  CHECK(std::abs(law.grid_mass() - 1.0) < 1e-6);
  CHECK(law.cdf(-1e6) < 1e-12);
  CHECK(law.cdf(1e6) > 1 - 1e-12);
  for (double q : {0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(law.cdf(law.quantile(q)) == doctest::Approx(q).epsilon(1e-6));
  CHECK(law.variance() == doctest::Approx(cumulant_closed_form(p, 2)));
}

TEST_CASE("mean absolute bias exceeds |C3|/(2 C2) when both tails are present") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const double c2 = cumulant_closed_form(p, 2);
  const double plus = tail_moment(p.right(), 3);
  const double minus = tail_moment(p.left(), 3);
  CHECK(mean_abs_bias_quadrature(p) == doctest::Approx((plus + minus) / (2 * c2)).epsilon(1e-8));
  CHECK(mean_abs_bias(p) == doctest::Approx(std::abs(plus - minus) / (2 * c2)));
  CHECK(mean_abs_bias_quadrature(p) > mean_abs_bias(p));
}

TEST_CASE("bias draws reproduce the first moment") {
  const auto p = bgd(1, 1, 1, 2);
  const BiasDistribution law(p);
  const auto ys = draw_chunked([&](RngStream& r) { return law.draw(r); }, 200000, 3, 1);
  double m = 0.0, m2 = 0.0;
  for (double y : ys) {
    m += y;
    m2 += y * y;
  }
  m /= ys.size();
  m2 /= ys.size();
  CHECK(std::abs(m - bias_moment(p, 1)) < 5 * std::sqrt((m2 - m * m) / ys.size()));
}
