#pragma once

#include <cstdint>
#include <string_view>

namespace dynnorm {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of `name`; used to derive named sub-streams.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Counter-based generator: the n-th 64-bit output of a stream is
/// mix64(key + (n + 1) * 0x9E3779B97F4A7C15), so any draw can be recomputed
/// from (key, n) alone. Streams are split by deriving new keys, never by
/// sharing state, which keeps results independent of evaluation order.
///
/// Normals use the Box-Muller transform on two consecutive uniforms
/// u1 in (0, 1], u2 in [0, 1), both with 53-bit resolution, and return the
/// cosine and sine branches in that order.
class CounterRng {
public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Child stream for (this key, name, index).
  CounterRng split(std::string_view name, std::uint64_t index = 0) const noexcept;

  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;                      // [0, 1)
  double uniform(double lo, double hi) noexcept;  // [lo, hi)
  double normal() noexcept;                       // N(0, 1)
  double normal(double mean, double sd) noexcept;
  /// Uniform integer in [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dynnorm
