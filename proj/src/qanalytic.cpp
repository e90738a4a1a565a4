#include "psra/qanalytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psra/detail/summation.hpp"
#include "psra/errors.hpp"

namespace psra {

using detail::CompensatedSum;

double mdone_mean(double rho) {
  if (!(rho > 0.0)) throw ConfigError("traffic intensity must be positive");
  if (rho >= 1.0) {
    throw DomainError("M/D/1 queue diverges for rho >= 1 (rho = " + std::to_string(rho) + ")");
  }
  return rho * (2.0 - rho) / (2.0 * (1.0 - rho));
}

QueueStationaryDist gidone_stationary(std::span<const double> q, std::size_t n_max) {
  if (q.empty()) throw ConfigError("empty slot-count distribution");
  if (n_max < 2) throw ConfigError("n_max must be at least 2");
  const double q0 = q[0];
  if (!(q0 > 0.0)) throw DomainError("P(no arrival in a slot) = 0: recursion is unsolvable");

  CompensatedSum rho_sum;
  for (std::size_t n = 1; n < q.size(); ++n) rho_sum += static_cast<double>(n) * q[n];
  const double rho = rho_sum.value();
  if (rho >= 1.0) {
    throw DomainError("slot arrival mean " + std::to_string(rho) + " >= 1: queue is unstable");
  }

  auto Q = [&](std::size_t n) { return n < q.size() ? q[n] : 0.0; };

  QueueStationaryDist out;
  out.traffic_intensity = rho;
  std::vector<double>& P = out.probs;
  P.push_back(1.0 - rho);
  P.push_back(P[0] * (1.0 - q0) / q0);

  constexpr double kFloor = 1e-12;
  for (std::size_t n = 1; n + 1 < n_max; ++n) {
    if (P[n] < kFloor && n + 1 >= q.size()) break;
    CompensatedSum acc;
    acc += P[n];
    acc += -P[0] * Q(n);
    const std::size_t k_first = n >= q.size() ? n + 1 - q.size() + 1 : 1;
    for (std::size_t k = std::max<std::size_t>(1, k_first); k <= n; ++k) {
      acc += -P[k] * Q(n - k + 1);
    }
    double next = acc.value() / q0;
    if (next < 0.0) {
      out.max_clamp = std::max(out.max_clamp, -next);
      next = 0.0;
    }
    P.push_back(next);
  }
  out.truncated = P.size() >= n_max && P.back() >= kFloor;

  CompensatedSum total;
  CompensatedSum mean;
  for (std::size_t n = 0; n < P.size(); ++n) {
    total += P[n];
    mean += static_cast<double>(n) * P[n];
  }
  // Geometric extrapolation of the tail from the last two terms.
  const std::size_t m = P.size();
  if (m >= 3 && P[m - 2] > 0.0) {
    const double r = P[m - 1] / P[m - 2];
    if (r > 0.0 && r < 1.0) out.residual = P[m - 1] * r / (1.0 - r);
  }
  out.mean = mean.value();
  const double err = std::abs(total.value() + out.residual - 1.0);
  if (err > 1e-9) {
    throw DomainError("stationary recursion lost normalisation (|sum - 1| = " +
                      std::to_string(err) + ")");
  }
  return out;
}

QueueStationaryDist gidone_stationary(const SlotCountDistribution& q, std::size_t n_max) {
  return gidone_stationary(std::span<const double>(q.probs), n_max);
}

double independence_approx_mean(std::span<const double> p) {
  CompensatedSum s1;
  CompensatedSum s2;
  for (double x : p) {
    s1 += x;
    s2 += x * x;
  }
  const double S = s1.value();
  if (S >= 1.0) {
    throw DomainError("expected arrivals per slot " + std::to_string(S) + " >= 1");
  }
  return (2.0 * S - S * S - s2.value()) / (2.0 * (1.0 - S));
}

double independence_approx_mean(const PsraProcess& proc, double t, double T) {
  return independence_approx_mean(window_probabilities(proc, t, T).probs);
}

}  // namespace psra
