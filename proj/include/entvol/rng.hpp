#pragma once

#include <cstdint>
#include <random>

namespace entvol {

/// Deterministic random stream with explicit substream derivation.
///
/// The engine is std::mt19937_64 seeded through SplitMix64, so the mapping
/// seed -> output is pinned by the C++ standard. split(k) derives a child
/// stream from the parent's construction seed and k only; it does not depend
/// on how much the parent has already consumed. Parallel workers therefore
/// see the same substreams under any scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Independent child stream number k of this stream.
  RngStream split(std::uint64_t k) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  /// Uniform on (0, 1]; safe as a logarithm argument.
  double uniform_pos();

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal deviate (Box-Muller, second deviate cached).
  double gaussian();

  /// Gamma(shape, 1) deviate via Marsaglia-Tsang squeeze.
  double gamma(double shape);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace entvol
