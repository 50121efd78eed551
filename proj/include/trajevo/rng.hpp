#pragma once

#include <cstdint>
#include <random>

namespace trajevo {

using Rng = std::mt19937_64;

// Purposes for which independent random streams are split off a master seed.
enum class StreamTag : std::uint32_t {
  trajectory = 1,
  ancestor = 2,
  mutation = 3,
  selection = 4,
  test = 99,
};

// Deterministic sub-stream derived from (seed, tag, a, b). Streams with any
// differing component are statistically independent.
Rng make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0);

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline double gaussian(Rng& rng, double stddev) {
  return std::normal_distribution<double>(0.0, stddev)(rng);
}

// Uniform index in [0, n). n must be > 0.
inline std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace trajevo
