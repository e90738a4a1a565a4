#include "psra/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "psra/errors.hpp"

namespace psra {
namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

// Standard normal upper tail.
double upper_tail(double z) noexcept { return 0.5 * std::erfc(z * std::numbers::sqrt2 / 2.0); }

double std_normal_pdf(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

}  // namespace

DelayDistribution DelayDistribution::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("gaussian delay needs a finite sigma > 0, got " + std::to_string(sigma));
  }
  return {DelayFamily::gaussian, sigma, std::numeric_limits<double>::infinity()};
}

DelayDistribution DelayDistribution::uniform(double half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError("uniform delay needs a finite half-width > 0, got " +
                      std::to_string(half_width));
  }
  return {DelayFamily::uniform_compact, half_width / std::numbers::sqrt3, half_width};
}

double DelayDistribution::peak() const noexcept {
  switch (family_) {
    case DelayFamily::gaussian:
      return kInvSqrt2Pi;
    case DelayFamily::uniform_compact:
      // Base density is uniform on [-sqrt3, sqrt3].
      return 1.0 / (2.0 * std::numbers::sqrt3);
  }
  return 0.0;
}

double DelayDistribution::pdf(double t) const noexcept {
  switch (family_) {
    case DelayFamily::gaussian:
      return std_normal_pdf(t / sigma_) / sigma_;
    case DelayFamily::uniform_compact:
      return std::abs(t) <= half_width_ ? 0.5 / half_width_ : 0.0;
  }
  return 0.0;
}

double DelayDistribution::cdf(double t) const noexcept {
  switch (family_) {
    case DelayFamily::gaussian: {
      const double z = t / sigma_;
      return z < 0.0 ? upper_tail(-z) : 1.0 - upper_tail(z);
    }
    case DelayFamily::uniform_compact:
      return std::clamp((t + half_width_) / (2.0 * half_width_), 0.0, 1.0);
  }
  return 0.0;
}

double DelayDistribution::interval_prob(double a, double b) const noexcept {
  if (!(b > a)) return 0.0;
  switch (family_) {
    case DelayFamily::gaussian: {
      const double za = a / sigma_;
      const double zb = b / sigma_;
      if (za >= 0.0) return upper_tail(za) - upper_tail(zb);
      if (zb <= 0.0) return upper_tail(-zb) - upper_tail(-za);
      // Straddles the mode: both tails are small, no cancellation.
      return 0.5 * (std::erf(zb / std::numbers::sqrt2) - std::erf(za / std::numbers::sqrt2));
    }
    case DelayFamily::uniform_compact: {
      const double lo = std::max(a, -half_width_);
      const double hi = std::min(b, half_width_);
      return hi > lo ? (hi - lo) / (2.0 * half_width_) : 0.0;
    }
  }
  return 0.0;
}

double DelayDistribution::tail_radius(double tail) const {
  if (!(tail > 0.0 && tail < 1.0)) throw ConfigError("tail_radius: tail must lie in (0, 1)");
  if (compact()) return half_width_;
  double z = 1.0;
  while (2.0 * upper_tail(z) >= tail) z += 0.25;
  return z * sigma_;
}

double DelayDistribution::lattice_tail_mass(double r, double spacing) const noexcept {
  if (compact()) {
    double sum = 0.0;
    for (double x = r; x < half_width_; x += spacing) {
      sum += (half_width_ - std::max(x, -half_width_)) / (2.0 * half_width_);
    }
    return sum;
  }
  // Sum of a decreasing function bounded by its first term plus the integral.
  const double z = r / sigma_;
  return upper_tail(z) + (sigma_ / spacing) * (std_normal_pdf(z) - z * upper_tail(z));
}

double DelayDistribution::lattice_tail_density(double r, double spacing) const noexcept {
  if (compact()) {
    double sum = 0.0;
    for (double x = r; x <= half_width_; x += spacing) sum += pdf(x);
    return sum;
  }
  const double z = r / sigma_;
  return std_normal_pdf(z) / sigma_ + upper_tail(z) / spacing;
}

double DelayDistribution::sample(RandomStream& rng) const noexcept {
  switch (family_) {
    case DelayFamily::gaussian:
      return sigma_ * rng.normal();
    case DelayFamily::uniform_compact:
      return half_width_ * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

}  // namespace psra
