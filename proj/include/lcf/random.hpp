#pragma once

#include <cstdint>
#include <random>

namespace lcf {

// SplitMix64 finalizer. Used to expand user seeds and to derive independent
// per-stream seeds, so block b of a campaign always sees the same numbers no
// matter which worker runs it.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seed-deterministic generator.
///
/// Raw bits come from std::mt19937_64 (whose output sequence is fixed by the
/// standard) seeded with splitmix64(seed). Uniform doubles take the top 53
/// bits; normals use the Box-Muller transform. The standard distributions are
/// deliberately not used because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace lcf
