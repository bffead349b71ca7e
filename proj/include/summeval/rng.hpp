#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace summeval {

// Deterministic sampling helpers. std::uniform_int_distribution,
// std::uniform_real_distribution and std::shuffle are all
// implementation-defined, so seeded runs would not be reproducible across
// standard libraries. Everything below consumes raw mt19937_64 output only.

// Uniform double in [0, 1) with 53 bits of precision.
inline double rng_uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound). bound must be >= 1. Unbiased via rejection.
inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t min = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= min) return r % bound;
  }
}

// Fisher-Yates with rng_below, so permutations are reproducible everywhere.
template <typename T>
void rng_shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng_below(rng, i)]);
  }
}

// FNV-1a, used to derive per-document inference seeds from token content.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::uint64_t fnv1a_tokens(const std::vector<std::string>& tokens) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& token : tokens) {
    hash = fnv1a(token, hash);
    hash ^= 0x1f;  // separator so {"ab","c"} != {"a","bc"}
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// splitmix64 finalizer; combines seeds without correlation artifacts.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace summeval
