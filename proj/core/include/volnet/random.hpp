#pragma once

#include <cstdint>
#include <random>

namespace volnet {

/// Seeded generator with platform-independent output. The std distributions
/// are implementation-defined, so uniform and normal draws are derived here
/// directly from the mt19937_64 bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound) without modulo bias. `bound` must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Derives an independent stream seed from a master seed and a stream index
/// (splitmix64 finalizer).
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace volnet
