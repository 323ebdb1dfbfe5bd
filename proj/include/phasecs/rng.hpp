#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace phasecs {

/// Seeded pseudo-random stream. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); the distributions are implemented
/// here rather than with <random>'s, whose outputs vary between standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n), unbiased (rejection sampling).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via the Box-Muller transform.
  double normal();
  /// +1 or -1 with equal probability.
  double sign();

  /// Independent stream derived from this stream's seed and a tag.
  Rng substream(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of 64-bit words into one seed.
std::uint64_t hash_seed(std::initializer_list<std::uint64_t> words);

/// Bit pattern of a double, for hashing real-valued grid coordinates.
std::uint64_t double_bits(double v);

}  // namespace phasecs
