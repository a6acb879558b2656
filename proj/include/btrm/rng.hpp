#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is addressed by a 64-bit key and a
// counter. The key of a sub-stream is derived from its parent key and an integer
// tag, so a draw depends only on (seed, tags..., counter). The output function is
// the SplitMix64 finalizer of Steele, Lea & Flood (2014), which is the
// standard seeding mixer for the xoshiro family. Results are therefore
// identical on every platform and for any partitioning of work across threads.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace btrm {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of the sub-stream `tag` of `parent`.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) noexcept {
  return mix64(mix64(parent + kGoldenGamma) ^ mix64(tag * kGoldenGamma + 0x632be59bd9b4e019ULL));
}

template <typename... Tags>
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag, Tags... rest) noexcept {
  if constexpr (sizeof...(rest) == 0) {
    return derive_key(parent, tag);
  } else {
    return derive_key(derive_key(parent, tag), static_cast<std::uint64_t>(rest)...);
  }
}

/// SplitMix64 stream viewed as a random-access sequence: draw n is
/// mix64(key + (n + 1) * gamma).
class CounterStream {
 public:
  constexpr explicit CounterStream(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t bits(std::uint64_t n) const noexcept {
    return mix64(key_ + (n + 1) * kGoldenGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t n) const noexcept {
    return static_cast<double>(bits(n) >> 11) * 0x1.0p-53;
  }

  /// Standard normal from draws 2n and 2n+1 (Box-Muller, cosine branch).
  double normal(std::uint64_t n) const noexcept {
    const double u1 = 1.0 - uniform(2 * n);  // (0, 1]
    const double u2 = uniform(2 * n + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
};

}  // namespace btrm
