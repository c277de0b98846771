#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace gausskey::rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used only to turn stream labels into integers.
inline constexpr std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Child seed for a named component ("codebook", "source", "hash", "bin").
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  return mix64(mix64(master) ^ label_hash(label));
}

/// Stateless generator: every output is a pure function of
/// (seed, stream, counter), so any partition of the counter range across
/// threads reproduces the same numbers.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream ^ 0x6A09E667F3BCC909ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ ^ mix64(counter)); }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal; counters 2k and 2k+1 form one Box-Muller pair.
  double normal(std::uint64_t counter) const {
    const std::uint64_t base = counter & ~std::uint64_t{1};
    const double radius = std::sqrt(-2.0 * std::log(uniform(base)));
    const double angle = 2.0 * std::numbers::pi * uniform(base + 1);
    return (counter & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
  }

 private:
  std::uint64_t key_;
};

}  // namespace gausskey::rng
