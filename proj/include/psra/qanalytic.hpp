#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "psra/psra.hpp"

namespace psra {

/// Mean number in system of M/D/1 at load rho: rho (2 - rho) / (2 (1 - rho)).
/// Throws DomainError for rho >= 1 (the queue diverges).
double mdone_mean(double rho);

/**
 * Stationary law of the slotted single-server queue n' = n - [n > 0] + m
 * with i.i.d. per-slot arrivals m ~ Q, observed just before service.
 *
 * The balance equations are solved forwards:
 *   P_0 = 1 - E[m]     (from P(1) = 1 in the generating function
 *                       P(z) = P_0 (1 - z) / (1 - z / Q(z)), letting z -> 1)
 *   P_1 = P_0 (1 - Q_0) / Q_0
 *   P_{n+1} = (P_n - P_0 Q_n - sum_{k=1}^{n} P_k Q_{n-k+1}) / Q_0.
 *
 * The recursion stops when P_n < 1e-12 or at `n_max` (default 10^4). The tail
 * beyond the last term is extrapolated geometrically into `residual`, and the
 * result is rejected if sum P_n + residual misses 1 by more than 1e-9.
 */
struct QueueStationaryDist {
  std::vector<double> probs;
  double traffic_intensity = 0.0;
  double residual = 0.0;
  double mean = 0.0;
  /// Largest negative round-off value clamped to zero (as a magnitude).
  double max_clamp = 0.0;
  /// True when the recursion hit n_max instead of the 1e-12 floor.
  bool truncated = false;
};

inline constexpr std::size_t kDefaultQueueStates = 10'000;

QueueStationaryDist gidone_stationary(std::span<const double> slot_pmf,
                                      std::size_t n_max = kDefaultQueueStates);
QueueStationaryDist gidone_stationary(const SlotCountDistribution& q,
                                      std::size_t n_max = kDefaultQueueStates);

/// Mean queue of the slotted queue when per-slot arrivals are treated as
/// independent Poisson-binomial(p) draws:
///   (2 S - S^2 - sum p^2) / (2 (1 - S)),  S = sum p.
double independence_approx_mean(std::span<const double> kept_probs);

/// Same, with p = survival * p_i(t, t + T).
double independence_approx_mean(const PsraProcess& proc, double t, double T);

}  // namespace psra
