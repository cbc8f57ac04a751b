#include "tsd/kernels.hpp"

#include "tsd/distance.hpp"

#include <exception>
#include <mutex>
#include <omp.h>
#include <sstream>

namespace tsd {

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Exec exec) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> cdf_on_grid(const NumericLaw& law, const std::vector<double>& xs, Exec exec) {
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), [&](std::size_t i) { out[i] = law.cdf(xs[i]); }, exec);
  return out;
}

std::vector<double> cdf_left_on_grid(const NumericLaw& law, const std::vector<double>& xs, Exec exec) {
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), [&](std::size_t i) { out[i] = law.cdf_left(xs[i]); }, exec);
  return out;
}

std::vector<double> draw_chunked(const DrawFn& draw, std::size_t size, std::uint64_t seed,
                                 std::uint64_t stream_id, Exec exec) {
  std::vector<double> out(size);
  const std::size_t chunks = (size + kSampleChunk - 1) / kSampleChunk;
  for_each_index(
      chunks,
      [&](std::size_t c) {
        RngStream rng(seed, (stream_id << 24) + c);
        const std::size_t end = std::min(size, (c + 1) * kSampleChunk);
        for (std::size_t i = c * kSampleChunk; i < end; ++i) out[i] = draw(rng);
      },
      exec);
  return out;
}

namespace {

std::string label(const TsdParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "TSD(" << p.m1() << ", " << p.alpha1() << ", " << p.lambda1() << ", " << p.m2() << ", "
      << p.alpha2() << ", " << p.lambda2() << ")";
  return out.str();
}

}  // namespace

SampleBatch sample_tempered_chunked(const TsdParams& params, std::size_t size, std::uint64_t seed,
                                    std::uint64_t stream_id, Exec exec) {
  const TsdSampler sampler(params);
  SampleBatch batch;
  batch.values = draw_chunked([&](RngStream& rng) { return sampler.draw(rng); }, size, seed, stream_id, exec);
  batch.law = label(params);
  batch.seed = seed;
  batch.stream_id = stream_id;
  batch.truncation_bias = sampler.truncation_bias();
  return batch;
}

SampleBatch sample_cpd_chunked(const TsdParams& params, int n, std::size_t size, std::uint64_t seed,
                               std::uint64_t stream_id, Exec exec) {
  const CpdSampler sampler(params, n);
  SampleBatch batch;
  batch.values = draw_chunked([&](RngStream& rng) { return sampler.draw(rng); }, size, seed, stream_id, exec);
  batch.law = "CPD n=" + std::to_string(n) + " of " + label(params);
  batch.seed = seed;
  batch.stream_id = stream_id;
  return batch;
}

std::vector<double> stein_on_grid(const SteinSolution& f, const std::vector<double>& xs, Exec exec) {
  std::vector<double> out(xs.size());
  for_each_index(xs.size(), [&](std::size_t i) { out[i] = f(xs[i]); }, exec);
  return out;
}

std::vector<QuadResult> expectations(const NumericLaw& law, const std::vector<TestFunction>& dict,
                                     Exec exec) {
  std::vector<QuadResult> out(dict.size());
  for_each_index(dict.size(), [&](std::size_t i) { out[i] = expectation(law, dict[i]); }, exec);
  return out;
}

}  // namespace tsd
