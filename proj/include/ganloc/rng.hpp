#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ganloc/types.hpp"

namespace ganloc {

// SplitMix64 finalizer. Used to derive child seeds from a master seed; the
// exact function is part of the reproducibility contract, so experiment
// reports can be regenerated bit-identically from (config, master_seed).
std::uint64_t mix64(std::uint64_t x);

// Deterministic random source: std::mt19937_64 keyed by a 64-bit seed.
// Uniform doubles, normals (Box-Muller) and index draws are implemented here
// on top of the raw 64-bit stream rather than through std::*_distribution,
// whose output is not pinned down by the standard. Identical seed therefore
// yields an identical draw stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal();

  // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::size_t index(std::size_t n);

  Matrix normal_matrix(Index rows, Index cols);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ganloc
