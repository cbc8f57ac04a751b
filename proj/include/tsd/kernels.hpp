#pragma once

// Hot loops, each in a serial reference form and an OpenMP form. Both forms produce
// identical output for any thread count: work is split into fixed chunks and every
// chunk owns its RNG stream, so parallelism only changes the order of evaluation.

#include "tsd/inversion.hpp"
#include "tsd/sampling.hpp"
#include "tsd/stein.hpp"
#include "tsd/test_function.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace tsd {

enum class Exec { serial, parallel };

/// Draws per chunk of the chunked samplers.
inline constexpr std::size_t kSampleChunk = 4096;

/// F(x) at every grid point.
std::vector<double> cdf_on_grid(const NumericLaw& law, const std::vector<double>& xs,
                                Exec exec = Exec::parallel);
/// F(x-) at every grid point.
std::vector<double> cdf_left_on_grid(const NumericLaw& law, const std::vector<double>& xs,
                                     Exec exec = Exec::parallel);

using DrawFn = std::function<double(RngStream&)>;

/// `size` draws; chunk c of kSampleChunk draws uses RngStream(seed, (stream_id << 24) + c).
std::vector<double> draw_chunked(const DrawFn& draw, std::size_t size, std::uint64_t seed,
                                 std::uint64_t stream_id, Exec exec = Exec::parallel);

SampleBatch sample_tempered_chunked(const TsdParams& params, std::size_t size, std::uint64_t seed,
                                    std::uint64_t stream_id, Exec exec = Exec::parallel);
SampleBatch sample_cpd_chunked(const TsdParams& params, int n, std::size_t size, std::uint64_t seed,
                               std::uint64_t stream_id, Exec exec = Exec::parallel);

/// f_h on a grid.
std::vector<double> stein_on_grid(const SteinSolution& f, const std::vector<double>& xs,
                                  Exec exec = Exec::parallel);

/// E h(X) with error estimates for every member of a dictionary (see expectation()).
std::vector<QuadResult> expectations(const NumericLaw& law, const std::vector<TestFunction>& dict,
                                     Exec exec = Exec::parallel);

/// Runs body(i) for i in [0, count), rethrowing the first exception on the caller.
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Exec exec);

}  // namespace tsd
