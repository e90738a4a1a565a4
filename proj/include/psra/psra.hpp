#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "psra/dists.hpp"
#include "psra/random.hpp"

namespace psra {

/**
 * Pre-scheduled random arrivals: customer i is scheduled at i / rate and
 * actually arrives at i / rate + xi_i, with xi_i i.i.d. from `delay`. Each
 * customer is independently kept with probability `survival` (deleted
 * otherwise), so the long-run arrival rate is survival * rate.
 */
struct PsraProcess {
  PsraProcess(double rate, DelayDistribution delay, double survival = 1.0);

  double rate;
  DelayDistribution delay;
  double survival;

  [[nodiscard]] double scheduled_time(std::int64_t i) const noexcept {
    return static_cast<double>(i) / rate;
  }
};

/// Probability that customer i arrives in (t, t + T], before deletion.
double arrival_prob_in_window(const PsraProcess& proc, std::int64_t i, double t, double T);

/// Instantaneous arrival rate survival * sum_i f(t - i / rate); periodic with period 1 / rate.
double rate(const PsraProcess& proc, double t);

/// Kept-arrival probabilities survival * p_i(t, t + T) over the indices that can matter.
struct WindowProbabilities {
  std::int64_t first_index = 0;
  std::vector<double> probs;
  /// Certified upper bound on the summed probabilities of the omitted indices.
  double excluded_mass = 0.0;
};

WindowProbabilities window_probabilities(const PsraProcess& proc, double t, double T,
                                         double eps = 1e-14);

/// Law of the number of arrivals in a window (a Poisson-binomial law).
struct SlotCountDistribution {
  std::vector<double> probs;
  /// Mass trimmed from the far right tail of `probs`.
  double truncation_residual = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  /// Bound on the arrival probability mass of indices left out of the product.
  double excluded_mass = 0.0;
  std::size_t active_indices = 0;
};

/// Exact pmf of a sum of independent Bernoulli(p_k) by forward convolution.
std::vector<double> poisson_binomial_pmf(std::span<const double> p);

SlotCountDistribution slot_count_dist(const PsraProcess& proc, double t, double T,
                                      double eps = 1e-12);

struct SlotMoments {
  double mean;
  double variance;
};

SlotMoments slot_moments(const PsraProcess& proc, double t, double T);

/// Cov(n(t, t+T), n(t+T, t+2T)); never positive.
double slot_covariance(const PsraProcess& proc, double t, double T);

/// sum_n |q_n - Poisson(survival * rate * T)_n|, in [0, 2].
double tv_distance_to_poisson(const PsraProcess& proc, double t, double T);

/**
 * Kept arrival time of customer i, drawn from `customers.substream(i)`: one
 * uniform for the survival decision, then the delay. The draws of a customer
 * depend only on (stream key, i).
 */
std::optional<double> draw_arrival(const PsraProcess& proc, std::int64_t i,
                                   const RandomStream& customers);

/// Index range [first, last] whose arrivals can land in [t0, t1) up to 1e-9 expected mass.
std::pair<std::int64_t, std::int64_t> relevant_indices(const PsraProcess& proc, double t0,
                                                       double t1);

/// Sorted arrival times falling in [t0, t1).
std::vector<double> sample_arrivals(const PsraProcess& proc, double t0, double t1,
                                    const RandomStream& customers);

}  // namespace psra
