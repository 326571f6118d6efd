#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rgbw/common.hpp"

namespace rgbw {

/// Seeded stream with platform-independent derived draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std::*_distribution templates are not (their algorithms are
/// implementation-defined), so every derived draw here is built directly
/// from raw 64-bit engine outputs.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  /// `count` distinct values from [0, n), in draw order.
  std::vector<Vertex> sample(Vertex n, std::size_t count);

  /// Derives an independent child seed (splitmix64 of the next output).
  Seed fork();

 private:
  std::mt19937_64 engine_;
};

}  // namespace rgbw
