#pragma once

#include "psra/random.hpp"

namespace psra {

enum class DelayFamily { gaussian, uniform_compact };

/**
 * Law of the i.i.d. delays added to scheduled arrival times.
 *
 * Every family is the rescaling f_sigma(t) = f(t / sigma) / sigma of a base
 * density f with unit variance and zero mean, so that sigma is the standard
 * deviation. peak() is max f (the base density), hence max f_sigma =
 * peak() / sigma. The uniform family is parametrised by its half-width L
 * (support [-L, L], sigma = L / sqrt(3)).
 *
 * Immutable after construction.
 */
class DelayDistribution {
 public:
  static DelayDistribution gaussian(double sigma);
  static DelayDistribution uniform(double half_width);

  [[nodiscard]] DelayFamily family() const noexcept { return family_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  /// Support half-width; +inf for the gaussian.
  [[nodiscard]] double half_width() const noexcept { return half_width_; }
  [[nodiscard]] bool compact() const noexcept {
    return family_ == DelayFamily::uniform_compact;
  }
  [[nodiscard]] double peak() const noexcept;
  [[nodiscard]] double variance() const noexcept { return sigma_ * sigma_; }

  [[nodiscard]] double pdf(double t) const noexcept;
  [[nodiscard]] double cdf(double t) const noexcept;
  /// P(a < xi <= b), evaluated on the shorter tail to avoid cancellation.
  [[nodiscard]] double interval_prob(double a, double b) const noexcept;

  /// Smallest r such that P(|xi| > r) < tail (r = L for compact support).
  [[nodiscard]] double tail_radius(double tail) const;
  /// Upper bound on sum_{k>=0} P(xi > r + k * spacing).
  [[nodiscard]] double lattice_tail_mass(double r, double spacing) const noexcept;
  /// Upper bound on sum_{k>=0} pdf(r + k * spacing), r >= 0.
  [[nodiscard]] double lattice_tail_density(double r, double spacing) const noexcept;

  double sample(RandomStream& rng) const noexcept;

 private:
  DelayDistribution(DelayFamily family, double sigma, double half_width)
      : family_(family), sigma_(sigma), half_width_(half_width) {}

  DelayFamily family_;
  double sigma_;
  double half_width_;
};

}  // namespace psra
