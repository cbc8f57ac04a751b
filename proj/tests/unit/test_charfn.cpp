#include "tsd/charfn.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

TEST_CASE("bilateral gamma cf equals the product of gamma cfs") {
  const double m1 = 1.5, l1 = 2.0, m2 = 0.7, l2 = 0.5;
  const auto p = bgd(m1, l1, m2, l2);
  for (double z : {-7.0, -1.0, -0.1, 0.3, 2.0, 12.0}) {
    const complex i(0.0, 1.0);
    const complex expected = std::pow(1.0 - i * z / l1, -m1) * std::pow(1.0 + i * z / l2, -m2);
    CHECK(std::abs(cf_tempered(p, z) - expected) < 1e-13);
  }
}

TEST_CASE("cf is Hermitian, bounded and one at the origin") {
  for (const auto& p : default_grid()) {
    CHECK(std::abs(cf_tempered(p, 0.0) - complex(1.0, 0.0)) < 1e-15);
    for (double z : {0.2, 1.5, 9.0}) {
      CHECK(std::abs(cf_tempered(p, -z) - std::conj(cf_tempered(p, z))) < 1e-14);
      CHECK(std::abs(cf_tempered(p, z)) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("exponent quadrature agrees with the closed form") {
  for (const auto& p : default_grid())
    for (double z : {-10.0, -1.0, 0.1, 1.0, 10.0})
      CHECK(std::abs(tempered_exponent(p, z) - tempered_exponent_quadrature(p, z)) < 1e-8);
}

TEST_CASE("the SVGD cf is the tempered cf with rate sqrt(2m)/lambda") {
  for (double m : {0.5, 3.0})
    for (double lam : {0.5, 2.0})
      for (double z : {-3.0, 0.5, 10.0})
        CHECK(std::abs(cf_svgd(m, lam, z) - cf_tempered(svgd(m, std::sqrt(2 * m) / lam), z)) < 1e-12);
}

TEST_CASE("derivatives of the exponent at zero are the cumulants") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const double h = 1e-4;
  // ψ'(0) = i C1, ψ''(0) = -C2.
  const complex d1 = (tempered_exponent(p, h) - tempered_exponent(p, -h)) / (2 * h);
  const complex d2 = (tempered_exponent(p, h) - 2.0 * tempered_exponent(p, 0) + tempered_exponent(p, -h)) / (h * h);
  CHECK(d1.imag() == doctest::Approx(cumulant_closed_form(p, 1)).epsilon(1e-6));
  CHECK(-d2.real() == doctest::Approx(cumulant_closed_form(p, 2)).epsilon(1e-5));
}

TEST_CASE("compound Poisson approximant converges to the target cf") {
  const auto p = bgd(1, 1, 1, 2);
  double prev = 1.0;
  for (int n : {1, 4, 16, 64}) {
    const double err = std::abs(cf_compound_poisson(p, n, 1.3) - cf_tempered(p, 1.3));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("tempered cf tends to the stable cf as the tempering vanishes") {
  const StableParams s(1, 1, 0.3);
  const double z = 0.8;
  double prev = 1.0;
  for (double lam : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double err = std::abs(cf_tempered(TsdParams(1, 0.3, lam, 1, 0.3, lam), z) - cf_stable(s, z));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("log mgf is finite only inside (-lambda2, lambda1)") {
  const auto cf = CharFn::tempered(TsdParams(1, 0.3, 2, 1, 0.3, 0.5));
  CHECK(std::isfinite(cf.log_mgf(1.9)));
  CHECK(std::isfinite(cf.log_mgf(-0.49)));
  CHECK(std::isinf(cf.log_mgf(2.1)));
  CHECK(std::isinf(cf.log_mgf(-0.6)));
  CHECK(cf.log_mgf(0.0) == 0.0);
}
