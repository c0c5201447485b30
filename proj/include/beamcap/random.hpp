#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "beamcap/rational.hpp"

namespace beamcap {

/// Injected randomness. Every random choice made by the channel model or a
/// probing policy goes through this interface, so oracles and tests can
/// substitute exhaustive enumeration for sampling.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  /// Uniform integer in [0, n). n must be >= 1.
  virtual std::uint64_t next_below(std::uint64_t n) = 0;

  /// Exact Bernoulli draw with success probability p (a rational in [0,1]).
  bool bernoulli(const Rational& p);
};

/// Default seeded source. Reproducible: the same seed yields the same draw
/// sequence on every platform (mt19937_64 plus unbiased rejection).
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next_below(std::uint64_t n) override;

 private:
  std::mt19937_64 eng_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stable per-worker / per-row seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Depth-first enumeration of every outcome sequence of a randomized
/// procedure. The body is re-run once per distinct path; it must be a
/// deterministic function of the draws it makes. After each run the path's
/// exact probability (product of 1/n over draws) is reported.
class PathEnumerator {
 public:
  /// Returns the number of paths enumerated.
  std::uint64_t enumerate(const std::function<void(RandomSource&)>& body,
                          const std::function<void(const Rational& weight)>& after_path);
};

}  // namespace beamcap
