#pragma once

#include <cstdint>
#include <optional>
#include <utility>

namespace dlms {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer (shift-xor-multiply mix of one state word).
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the stream at `index` for ensemble run `run`.
///
/// Equals the (index+1)-th output of a SplitMix64 generator seeded with
/// `seed ^ run`, so any implementation of SplitMix64 reproduces it.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t run,
                                    std::uint64_t index) noexcept {
  return splitmix64_finalize((seed ^ run) + (index + 1) * kGoldenGamma);
}

/// Maps a raw 64-bit draw onto (0, 1] using its top 53 bits.
constexpr double uniform_from_bits(std::uint64_t raw) noexcept {
  return static_cast<double>((raw >> 11) + 1) * 0x1.0p-53;
}

/// Box-Muller pair (cosine deviate, sine deviate) for uniforms in (0, 1].
std::pair<double, double> box_muller(double u1, double u2);

/// Seedable SplitMix64 stream with Box-Muller Gaussian deviates.
///
/// Single owner; move it between threads but never share it. The sine
/// deviate of each Box-Muller pair is cached and returned by the next
/// Gaussian call, whatever mean and sd that call asks for.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    ++raw_draws_;
    return splitmix64_finalize(state_);
  }

  double next_uniform() noexcept { return uniform_from_bits(next_u64()); }

  /// Throws ConfigError when `sd` is negative or not a number.
  double next_gaussian(double mean, double sd);

  /// Number of 64-bit words consumed so far.
  std::uint64_t raw_draws() const noexcept { return raw_draws_; }
  bool has_cached_gaussian() const noexcept { return cached_.has_value(); }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t state_;
  std::uint64_t raw_draws_ = 0;
  std::optional<double> cached_;
};

}  // namespace dlms
