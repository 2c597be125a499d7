#pragma once

// Counter-based random streams.
//
// Every stream is a splitmix64 sequence whose starting state is derived
// from (seed, purpose, t, index). Two runs that ask for the same tuple see
// the same numbers regardless of thread count or processing order, which is
// what makes the parallel Monte Carlo step bit-identical to the sequential one.
//
// The derivation is part of the file-format contract and is spelled out in
// README.md; do not change the constants.

#include <cstdint>
#include <limits>

namespace drm::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum class Purpose : std::uint64_t {
  kInit = 1,
  kShuffle = 2,
  kPair = 3,
  kSampling = 4,
};

/// Starting state for the stream identified by (seed, purpose, t, index).
constexpr std::uint64_t derive_key(std::uint64_t seed, Purpose purpose, std::uint64_t t,
                                   std::uint64_t index) noexcept {
  std::uint64_t k = seed;
  k = mix64(k ^ mix64(static_cast<std::uint64_t>(purpose) + kGolden));
  k = mix64(k ^ mix64(t + kGolden));
  k = mix64(k ^ mix64(index + kGolden));
  return k;
}

/// A splitmix64 generator. Satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t key) noexcept : state_(key) {}
  constexpr Stream(std::uint64_t seed, Purpose purpose, std::uint64_t t, std::uint64_t index) noexcept
      : state_(derive_key(seed, purpose, t, index)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_open0() noexcept { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal deviate (Marsaglia polar method; discards the spare).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace drm::rng
