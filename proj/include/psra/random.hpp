#pragma once

#include <cstdint>
#include <limits>

namespace psra {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Counter-based random stream.
 *
 * The n-th draw is a pure function of (key, n), so streams can be split into
 * independent children by id without touching the parent. Simulations give
 * every scheduled customer its own substream keyed by its index; the draws of
 * customer i are then identical whatever window or horizon is simulated.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(mix64(seed) ^ mix64(~stream))) {}

  /// Independent child stream; does not advance this one.
  [[nodiscard]] RandomStream substream(std::uint64_t id) const noexcept {
    RandomStream child(0);
    child.key_ = mix64(key_ ^ mix64(id ^ 0x5851f42d4c957f2dULL));
    return child;
  }

  [[nodiscard]] RandomStream substream(std::int64_t id) const noexcept {
    return substream(static_cast<std::uint64_t>(id));
  }

  std::uint64_t next_u64() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (Box-Muller, cosine branch only).
  double normal() noexcept;

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t draws() const noexcept { return counter_; }

  result_type operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace psra
