#pragma once

// Deterministic RNG with named seed derivation. Standard-library engines and
// distributions are avoided on purpose: their output is not bit-stable across
// implementations, and every corpus, language file, and report here must be
// byte-identical under a fixed seed regardless of platform or thread count.

#include <cstdint>
#include <string_view>
#include <vector>

namespace dialup {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// FNV-1a over the seed and any number of string/integer qualifiers, finalized
// through one splitmix step. Used as: derive_seed(seed, "purpose", index...).
inline std::uint64_t fnv1a_accumulate(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t fnv1a_accumulate(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= static_cast<unsigned char>(v >> (8 * i));
    h *= 0x100000001B3ull;
  }
  return h;
}

template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t seed, Parts&&... parts) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  h = fnv1a_accumulate(h, seed);
  ((h = fnv1a_accumulate(h, parts)), ...);
  std::uint64_t state = h;
  return splitmix64(state);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform index in [0, n); n must be > 0. Rejection sampling keeps the
  // draw unbiased and platform-stable.
  std::size_t uniform_index(std::size_t n) {
    std::uint64_t bound = static_cast<std::uint64_t>(n);
    std::uint64_t limit = ~0ull - (~0ull % bound);
    std::uint64_t v;
    do { v = next_u64(); } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  // Draws an index proportionally to nonnegative weights (sum > 0).
  std::size_t weighted_index(const std::vector<double>& weights, double total) {
    double x = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace dialup
