#include "tsd/charfn.hpp"
#include "tsd/kernels.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace tsd;

TEST_CASE("serial and parallel CDF grids are identical") {
  const auto law = make_law(CharFn::tempered(TsdParams(1, 0.3, 1, 1.5, 0.2, 2)));
  std::vector<double> xs;
  for (int i = 0; i < 64; ++i) xs.push_back(law.lo() + (law.hi() - law.lo()) * i / 63);
  CHECK(cdf_on_grid(law, xs, Exec::serial) == cdf_on_grid(law, xs, Exec::parallel));
  CHECK(cdf_left_on_grid(law, xs, Exec::serial) == cdf_left_on_grid(law, xs, Exec::parallel));
}

TEST_CASE("CDF values do not depend on evaluation order") {
  const auto law = make_law(CharFn::tempered(TsdParams(1, 0.3, 1, 1.5, 0.2, 2)));
  const double first = law.cdf(0.7);
  for (double x : {-40.0, 3.0, 25.0, -0.2}) (void)law.cdf(x);
  CHECK(law.cdf(0.7) == first);
}

TEST_CASE("chunk streams are laid out by chunk index") {
  const auto xs = draw_chunked([](RngStream& r) { return r.uniform(); }, kSampleChunk + 3, 9, 1, Exec::parallel);
  RngStream second(9, (1ull << 24) + 1);
  CHECK(xs[kSampleChunk] == second.uniform());
  RngStream first(9, 1ull << 24);
  CHECK(xs[0] == first.uniform());
}

TEST_CASE("exceptions in parallel bodies reach the caller") {
  auto body = [](std::size_t i) {
    if (i == 5) throw std::runtime_error("boom");
  };
  CHECK_THROWS_AS(for_each_index(20, body, Exec::parallel), std::runtime_error);
  CHECK_THROWS_AS(for_each_index(20, body, Exec::serial), std::runtime_error);
}

TEST_CASE("dictionary expectations agree between execution modes") {
  const auto law = make_law(CharFn::tempered(bgd(1, 1, 1, 2)));
  const auto dict = smooth_dictionary();
  const auto a = expectations(law, dict, Exec::serial);
  const auto b = expectations(law, dict, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}
