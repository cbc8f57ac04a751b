#include "tsd/distance.hpp"
#include "tsd/kernels.hpp"
#include "tsd/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace tsd;

namespace {

std::pair<double, double> mean_var(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss / (n - 1)};
}

}  // namespace

TEST_CASE("sample moments match the cumulants") {
  for (const TsdParams& p : {bgd(1, 1, 1, 2), TsdParams(1, 0.3, 1, 1.5, 0.2, 2), TsdParams(0.5, 0.7, 3, 2, 0.3, 1)}) {
    const std::size_t n = 200000;
    const auto xs = sample_tempered_chunked(p, n, 7, 1).values;
    const auto [mean, var] = mean_var(xs);
    const double c2 = cumulant_closed_form(p, 2);
    CHECK(std::abs(mean - cumulant_closed_form(p, 1)) < 5.0 * std::sqrt(c2 / n));
    // Var of the sample variance is about (C4 + 2 C2²)/n.
    const double var_se = std::sqrt((cumulant_closed_form(p, 4) + 2 * c2 * c2) / n);
    CHECK(std::abs(var - c2) < 5.0 * var_se);
  }
}

TEST_CASE("samples pass a Kolmogorov test against the inverted CDF") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const auto batch = sample_tempered_chunked(p, 100000, 11, 3);
  const auto d = kolmogorov(make_law(CharFn::tempered(p)), batch);
  CHECK(d.value < dkw_band(100000, 1e-3));
}

TEST_CASE("tail sampler picks gamma, tilted stable or truncation") {
  CHECK(TailSampler(Tail{1, 0.0, 1}).method() == TailMethod::gamma);
  CHECK(TailSampler(Tail{1, 0.5, 1}).method() == TailMethod::tilted_stable);
  const TailSampler truncated(Tail{1, 0.5, 1}, 1e-3);
  CHECK(truncated.method() == TailMethod::truncated_jumps);
  // ∫_0^eps u² m u^{-1.5} e^{-u} du ≈ m eps^{1.5}/1.5.
  CHECK(truncated.truncation_bias() == doctest::Approx(std::pow(1e-3, 1.5) / 1.5).epsilon(1e-2));
}

TEST_CASE("chunked sampling is reproducible and thread-independent") {
  const TsdParams p(1, 0.3, 1, 1.5, 0.2, 2);
  const auto a = sample_tempered_chunked(p, 3 * kSampleChunk + 17, 5, 2, Exec::serial);
  const auto b = sample_tempered_chunked(p, 3 * kSampleChunk + 17, 5, 2, Exec::parallel);
  const auto c = sample_tempered_chunked(p, 3 * kSampleChunk + 17, 6, 2, Exec::parallel);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  const auto cpd_a = sample_cpd_chunked(p, 8, 5000, 5, 4, Exec::serial);
  const auto cpd_b = sample_cpd_chunked(p, 8, 5000, 5, 4, Exec::parallel);
  CHECK(cpd_a.values == cpd_b.values);
}

TEST_CASE("compound Poisson draws have the target mean and an atom at zero") {
  const auto p = bgd(1, 1, 1, 2);
  const int n = 2;
  const auto xs = sample_cpd_chunked(p, n, 200000, 9, 1).values;
  const auto [mean, var] = mean_var(xs);
  CHECK(std::abs(mean - cumulant_closed_form(p, 1)) < 5.0 * std::sqrt(var / xs.size()));
  const double zeros = static_cast<double>(std::count(xs.begin(), xs.end(), 0.0)) / xs.size();
  CHECK(std::abs(zeros - std::exp(-n)) < 5.0 * std::sqrt(std::exp(-n) / xs.size()));
}

TEST_CASE("RNG streams are independent counters") {
  RngStream a(1, 1), b(1, 1), c(1, 2);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  RngStream a2(1, 1);
  CHECK(a2() != c());
  double s = 0.0;
  RngStream u(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    CHECK_UNARY(x > 0.0);
    CHECK_UNARY(x < 1.0);
    s += x;
  }
  CHECK(std::abs(s / 100000 - 0.5) < 5 * std::sqrt(1.0 / 12 / 100000));
}
