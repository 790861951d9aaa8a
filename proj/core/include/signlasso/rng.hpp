#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace signlasso {

/// SplitMix64 finalizer. Used to derive independent child seeds from a master
/// seed and integer keys (n, replicate, stream id).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic hash of (seed, keys...) into a child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept;

/// Seeded generator with distribution routines implemented here rather than
/// via <random> distributions, whose output sequences are
/// implementation-defined. std::mt19937_64's raw sequence is fixed by the
/// standard, so a given seed yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal via Box-Muller (one cached spare).
  double normal();
  /// Poisson(lambda) draw; lambda must be finite and >= 0.
  std::int64_t poisson(double lambda);

 private:
  std::int64_t poisson_inversion(double lambda);
  std::int64_t poisson_ptrs(double lambda);

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace signlasso
