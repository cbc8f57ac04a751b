#include "tsd/charfn.hpp"
#include "tsd/inversion.hpp"
#include "tsd/test_function.hpp"

#include <doctest.h>

#include <cmath>

using namespace tsd;

TEST_CASE("declared sup norms hold for every dictionary member") {
  for (const auto& h : stein_dictionary()) CHECK(check_sup_norms(h).passed);
  for (const auto& h : smooth_dictionary()) {
    CHECK(check_sup_norms(h).passed);
    for (int k = 0; k <= 3; ++k) CHECK(h.sup_norm(k) <= 1.0 + 1e-12);
  }
  for (const char* id : {"gauss", "sin_gauss", "xexp_raw", "sin_raw:3"}) CHECK(check_sup_norms(make_test_function(id)).passed);
}

TEST_CASE("analytic derivatives match finite differences") {
  const double step = 1e-5;
  for (const char* id : {"tanh", "xexp", "sin:2:0.3", "gauss", "sin_gauss"}) {
    const auto h = make_test_function(id);
    for (double x : {-1.3, 0.2, 2.1})
      for (int k = 0; k < 3; ++k) {
        const double fd = (h.derivative(k, x + step) - h.derivative(k, x - step)) / (2 * step);
        CHECK(h.derivative(k + 1, x) == doctest::Approx(fd).epsilon(1e-6));
      }
  }
  CHECK_THROWS_AS(make_test_function("cosh"), std::invalid_argument);
}

TEST_CASE("spectral expectations match quadrature against the law") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const auto cf = CharFn::tempered(p);
  const auto law = make_law(cf);
  const double strip = std::min(p.lambda1(), p.lambda2());
  const auto phi = [&](double z) { return cf(z); };
  for (const char* id : {"tanh", "gauss", "sin:1"}) {
    const auto h = make_test_function(id);
    REQUIRE(h.derivative_spectrum());
    for (double a : {-1.0, 0.0, 2.0}) {
      const auto dh = spectral_expectation(*h.derivative_spectrum(), phi, a, strip);
      const double direct_dh = law.expect([&](double x) { return h.derivative(1, a + x); },
                                          [&](double x) { return h.derivative(2, a + x); });
      CHECK(dh.value == doctest::Approx(direct_dh).epsilon(1e-7));
      if (!h.spectrum()) continue;
      const auto hv = spectral_expectation(*h.spectrum(), phi, a, strip);
      const double direct = law.expect([&](double x) { return h(a + x); }, [&](double x) { return h.derivative(1, a + x); });
      CHECK(hv.value == doctest::Approx(direct).epsilon(1e-7));
    }
  }
  // tanh is not integrable: only h' has a spectrum.
  CHECK_FALSE(make_test_function("tanh").spectrum());
}

TEST_CASE("scaling a test function scales its norms") {
  const auto h = make_test_function("tanh").scaled(0.5, "half");
  CHECK(h.sup_norm(0) == doctest::Approx(0.5));
  CHECK(h(1.0) == doctest::Approx(0.5 * std::tanh(1.0)));
}
