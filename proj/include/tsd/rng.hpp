#pragma once

#include <cstdint>
#include <limits>

namespace tsd {

/// Counter-based generator: output k of stream (seed, id) is a keyed SplitMix64
/// hash of k, so streams never overlap and can be consumed in any order.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double exponential();
  double normal();
  double gamma(double shape, double rate);
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tsd
