#include "tsd/charfn.hpp"
#include "tsd/distance.hpp"
#include "tsd/kernels.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

TEST_CASE("Wasserstein-1 of a shifted sample is the shift") {
  SampleBatch a, b;
  RngStream rng(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal();
    a.values.push_back(x);
    b.values.push_back(x + 0.5);
  }
  CHECK(wasserstein1_empirical(a, b).value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("two-sample Kolmogorov statistic on a small example") {
  SampleBatch a, b;
  a.values = {0.0, 1.0, 2.0, 3.0};
  b.values = {2.5, 3.5, 4.5, 5.5};
  // At x = 2: F_a = 3/4, F_b = 0.
  CHECK(kolmogorov(a, b).value == doctest::Approx(0.75));
  CHECK(kolmogorov(a, a).value == 0.0);
}

TEST_CASE("Kolmogorov distance is a metric on inverted laws") {
  const auto a = make_law(CharFn::tempered(bgd(1, 1, 1, 2)));
  const auto b = make_law(CharFn::tempered(bgd(1.2, 1, 1, 2)));
  const auto c = make_law(CharFn::tempered(TsdParams(1, 0.3, 1, 1, 0.3, 2)));
  const auto ab = kolmogorov(a, b);
  const auto ba = kolmogorov(b, a);
  CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-9));
  CHECK(kolmogorov(a, a).value < 1e-9);
  const auto ac = kolmogorov(a, c);
  const auto bc = kolmogorov(b, c);
  CHECK(ac.value <= ab.value + bc.value + ab.error + bc.error + ac.error);
}

TEST_CASE("Kolmogorov distance between exponential differences") {
  // BGD(1, a, 1, b) vs BGD(1, a, 1, b'): CDFs known in closed form, maximum on a fine grid.
  auto cdf = [](double a, double b, double x) {
    return x < 0.0 ? a / (a + b) * std::exp(b * x) : 1.0 - b / (a + b) * std::exp(-a * x);
  };
  double exact = 0.0;
  for (double x = -20.0; x <= 20.0; x += 1e-4) exact = std::max(exact, std::abs(cdf(1, 2, x) - cdf(1, 3, x)));
  const auto d = kolmogorov(make_law(CharFn::tempered(bgd(1, 1, 1, 2))), make_law(CharFn::tempered(bgd(1, 1, 1, 3))));
  CHECK(std::abs(d.value - exact) <= d.error + 1e-8);
}

TEST_CASE("smooth lower bound never exceeds W1") {
  const TsdParams pa(1, 0.3, 1, 1.5, 0.2, 2);
  const auto pb = bgd(1, 1, 1, 2);
  const auto sa = sample_tempered_chunked(pa, 100000, 1, 1);
  const auto sb = sample_tempered_chunked(pb, 100000, 1, 2);
  const auto w1 = wasserstein1_empirical(sa, sb);
  const auto lower = smooth_h3_lower(make_law(CharFn::tempered(pa)), make_law(CharFn::tempered(pb)), smooth_dictionary());
  CHECK(lower.value <= w1.value + 4 * w1.error + lower.error);
  const auto lower_mc = smooth_h3_lower(sa, sb, smooth_dictionary());
  CHECK(std::abs(lower_mc.value - lower.value) <= lower_mc.error + lower.error + 1e-2);
}

TEST_CASE("dictionary members must have unit derivative norms") {
  const auto law = make_law(CharFn::tempered(bgd(1, 1, 1, 2)));
  CHECK_THROWS_AS(smooth_h3_lower(law, law, {make_test_function("sin_raw:2")}), std::invalid_argument);
}

TEST_CASE("DKW band") {
  CHECK(dkw_band(1000000, 0.05) == doctest::Approx(std::sqrt(std::log(40.0) / 2e6)));
}
