#include "tsd/errors.hpp"
#include "tsd/quadrature.hpp"
#include "tsd/special.hpp"

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>

using namespace tsd;

TEST_CASE("adaptive quadrature on known integrals") {
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity()).value ==
        doctest::Approx(1.0).epsilon(1e-11));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_panels([](double x) { return std::cos(20 * x); }, 0.0, 10.0, 50).value ==
        doctest::Approx(std::sin(200.0) / 20).epsilon(1e-9));
}

TEST_CASE("tempered Levy tail integrals are gamma functions") {
  // ∫ u^n m u^{-1-α} e^{-λu} du = m Γ(n-α) λ^{α-n}.
  const double inf = std::numeric_limits<double>::infinity();
  for (double a : {0.0, 0.3, 0.7, 0.95})
    for (int n : {1, 2, 3}) {
      const auto r = integrate_levy_tail([n](double u) { return std::pow(u, n); }, 1.5, a, 0.8, inf, 1e-10, n);
      CHECK(r.value == doctest::Approx(1.5 * std::tgamma(n - a) * std::pow(0.8, a - n)).epsilon(1e-9));
    }
}

TEST_CASE("incomplete gamma pieces add up") {
  for (double a : {0.3, 1.0, 2.5})
    for (double x : {0.1, 1.0, 7.0}) CHECK(upper_gamma(a, x) + lower_gamma(a, x) == doctest::Approx(std::tgamma(a)));
  CHECK(gamma_fn(-1.5) == doctest::Approx(4 * std::sqrt(M_PI) / 3));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  for (const GaussRule* rule : {&gauss_legendre_32(), &gauss_legendre_64()}) {
    double w = 0.0, m5 = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      w += rule->weights[i];
      m5 += rule->weights[i] * std::pow(rule->nodes[i], 5);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m5 == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }
}

TEST_CASE("non-integrable integrands raise NumericalError") {
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12, 0.0, 8), NumericalError);
}

TEST_CASE("expm1 helpers are accurate near zero") {
  const complex w(1e-12, -2e-12);
  CHECK(std::abs(tsd::expm1(w) - w) < 1e-23);
  CHECK(std::abs(expm1_over(0.0, complex(0.3, 0.1)) - complex(0.3, 0.1)) < 1e-15);
  CHECK(std::abs(expm1_over(2.0, complex(0.3, 0.0)) - complex((std::exp(0.6) - 1) / 2, 0)) < 1e-15);
}

TEST_CASE("Fourier rule matches closed forms") {
  auto decay = [](double t) { return std::exp(-t); };
  for (double w : {0.3, 1.0, 7.5}) {
    const auto s = integrate_fourier(decay, w, FourierKind::sine, 1e-12);
    const auto c = integrate_fourier(decay, w, FourierKind::cosine, 1e-12);
    CHECK(s.value == doctest::Approx(w / (1 + w * w)).epsilon(1e-11));
    CHECK(c.value == doctest::Approx(1 / (1 + w * w)).epsilon(1e-11));
    CHECK(s.error < 1e-10);
  }
  // Slow algebraic decay: Dirichlet integral.
  const auto d = integrate_fourier([](double t) { return 1.0 / t; }, 2.0, FourierKind::sine, 1e-10);
  CHECK(d.value == doctest::Approx(M_PI / 2).epsilon(1e-9));
  CHECK(integrate_fourier(decay, -1.0, FourierKind::sine, 1e-12).value == doctest::Approx(-0.5));
  CHECK(integrate_fourier(decay, -1.0, FourierKind::cosine, 1e-12).value == doctest::Approx(0.5));
}

TEST_CASE("Fourier rule agrees with Boost's integrator and ignores call history") {
  auto f = [](double t) { return std::exp(-0.3 * t * t) / (1 + t); };
  boost::math::quadrature::ooura_fourier_sin<double> reference(1e-12, 5);
  const double first = integrate_fourier(f, 1.3, FourierKind::sine, 1e-12).value;
  CHECK(first == doctest::Approx(reference.integrate(f, 1.3).first).epsilon(1e-10));
  for (double w : {0.01, 40.0, 0.2}) (void)integrate_fourier(f, w, FourierKind::sine, 1e-6);
  CHECK(integrate_fourier(f, 1.3, FourierKind::sine, 1e-12).value == first);
}
