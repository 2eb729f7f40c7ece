#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace spectrank {

/// Counter-based pseudo-random stream: Philox-4x32 with 10 rounds keyed by
/// a 64-bit seed, with the 64-bit stream id occupying the upper counter
/// words. A given (seed, stream) pair yields the same sample sequence on
/// every platform; distinct stream ids give statistically independent
/// streams, so parallel workers fork sub-streams instead of sharing state.
///
/// The state is a plain value: copying it replays the sequence from the
/// copy point, which is what the reproducibility tests rely on.
class RngState {
 public:
  RngState() = default;
  explicit RngState(uint64_t seed, uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  /// Derives an independent stream from this one; used for per-document /
  /// per-point generation so results do not depend on iteration order.
  RngState substream(uint64_t index) const;

  uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform on (0, 1); safe as a log() argument.
  double uniform_open01();

 private:
  uint64_t seed_ = 0;
  uint64_t stream_ = 0;
  uint64_t counter_ = 0;
};

/// Stable 64-bit hash of (experiment name, sweep point, run index) used to
/// derive sweep stream ids. FNV-1a over the name, then avalanche-mixed with
/// the indices; never changes across versions or platforms.
uint64_t stream_hash(std::string_view experiment, uint64_t point, uint64_t run);

/// One draw from Gamma(shape, 1). Marsaglia-Tsang squeeze/rejection for
/// shape >= 1; shapes below 1 are boosted via Gamma(shape+1) * U^(1/shape).
/// Throws ParamError unless shape > 0.
double gamma_sample(double shape, RngState& rng);

/// One draw from Dir(alphas), computed as normalized independent Gamma
/// draws. Entries are non-negative and sum to 1 within 1e-12.
std::vector<double> dirichlet_sample(std::span<const double> alphas, RngState& rng);

/// Index draw from a discrete distribution. probs must be non-negative and
/// sum to 1 within 1e-9.
int categorical_sample(std::span<const double> probs, RngState& rng);

/// One draw from N(mean, variance), variance > 0 (Box-Muller).
double gaussian_sample(double mean, double variance, RngState& rng);

/// Vector of independent coordinates, entry j drawn from N(mean[j], variance).
std::vector<double> gaussian_vector_sample(std::span<const double> mean,
                                           double variance, RngState& rng);

}  // namespace spectrank
