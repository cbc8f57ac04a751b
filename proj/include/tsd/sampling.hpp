#pragma once

#include "tsd/model.hpp"
#include "tsd/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace tsd {

struct SampleBatch {
  std::vector<double> values;
  std::string law;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  /// Variance left out by small-jump truncation; zero for exact samplers.
  double truncation_bias = 0.0;
};

/// How one tail of a TSD is simulated.
enum class TailMethod { gamma, tilted_stable, truncated_jumps };

/// Draws from a one-sided tempered stable law with Lévy density
/// m u^{-1-α} e^{-λu} on (0, ∞).
class TailSampler {
 public:
  /// Exact sampler: gamma for α = 0, otherwise tilted-stable rejection. When a
  /// single rejection step would accept less than e^{-1} of the time, the law is
  /// split into k i.i.d. pieces TS(m/k) that are summed. Laws needing more than
  /// `max_pieces` pieces fall back to small-jump truncation at 1e-3.
  explicit TailSampler(const Tail& tail, int max_pieces = 64);
  /// Small-jump truncation at `eps`.
  TailSampler(const Tail& tail, double eps);

  double draw(RngStream& rng) const;

  TailMethod method() const { return method_; }
  int pieces() const { return pieces_; }
  double eps() const { return eps_; }
  /// ∫_0^eps u² ν(du): variance missing from the truncated sampler.
  double truncation_bias() const { return bias_; }
  /// Probability that one rejection step accepts.
  double acceptance() const { return acceptance_; }

 private:
  void setup_truncation(double eps);
  double draw_tilted(RngStream& rng) const;
  double draw_truncated(RngStream& rng) const;
  double draw_jump(RngStream& rng) const;

  Tail tail_;
  TailMethod method_ = TailMethod::gamma;
  int pieces_ = 1;
  double piece_scale_ = 0.0;  // c^{1/α} of one piece's positive stable law
  double acceptance_ = 1.0;
  // truncation state
  double eps_ = 0.0;
  double split_ = 0.0;       // boundary between the power-law and exponential proposals
  double rate_ = 0.0;        // total jump rate above eps
  double near_weight_ = 0.0; // P(jump < split)
  double drift_ = 0.0;       // ∫_0^eps u ν(du)
  double bias_ = 0.0;
};

/// Positive α-stable variate with Laplace transform exp(-s^α) (Kanter's formula).
double draw_positive_stable(double alpha, RngStream& rng);

/// TSD sampler: right-tail variate minus an independent left-tail variate.
class TsdSampler {
 public:
  explicit TsdSampler(const TsdParams& params);
  TsdSampler(const TsdParams& params, double eps);
  double draw(RngStream& rng) const;
  const TailSampler& right() const { return right_; }
  const TailSampler& left() const { return left_; }
  double truncation_bias() const { return right_.truncation_bias() + left_.truncation_bias(); }

 private:
  TailSampler right_;
  TailSampler left_;
};

/// Draws X_n: N ~ Poisson(n) jumps, each TSD with intensities divided by n.
class CpdSampler {
 public:
  CpdSampler(const TsdParams& params, int n);
  double draw(RngStream& rng) const;

 private:
  int n_;
  TsdSampler jump_;
};

SampleBatch sample_bgd(const TsdParams& params, std::size_t size, RngStream& rng);
SampleBatch sample_tempered_onesided(double m, double alpha, double lambda, std::size_t size,
                                     RngStream& rng);
SampleBatch sample_tempered(const TsdParams& params, std::size_t size, RngStream& rng);
SampleBatch sample_truncation(const TsdParams& params, double eps, std::size_t size, RngStream& rng);
SampleBatch sample_cpd_approximant(const TsdParams& params, int n, std::size_t size, RngStream& rng);

}  // namespace tsd
