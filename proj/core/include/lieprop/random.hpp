#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

#include "lieprop/types.hpp"

namespace lieprop {

/// SplitMix64 output function; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for (seed, k0, k1, ...). Distinct tuples give unrelated keys.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

/// SplitMix64 engine: a counter advanced by a fixed odd increment and
/// scrambled by mix64. Models std::uniform_random_bit_generator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t z = state_;
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(z);
  }

 private:
  std::uint64_t state_;
};

/// Standard normal draws from a keyed stream.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t key) : engine_(key) {}

  double next() { return dist_(engine_); }

  Vector next(Eigen::Index n) {
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = dist_(engine_);
    return z;
  }

 private:
  SplitMix64 engine_;
  std::normal_distribution<double> dist_;
};

}  // namespace lieprop
