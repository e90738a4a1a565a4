#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "psra/dists.hpp"

namespace psra {

/**
 * Occupancy of the compact-support model (rate 1, delays supported on
 * [-L, L], integer L).
 *
 * At integer time j every customer with index <= j - L has arrived and none
 * with index >= j + L has, so the state is the set I_j of indices j + m,
 * m in {-L+1, ..., L-1}, that have already arrived. Customer j + m has
 * arrived by time j iff xi <= -m, hence
 *
 *   q_m = F(-m),   w_m = q_m / (1 - q_m).
 *
 * For uniform delays q_m = (L - m) / (2L) and w_m = (L - m) / (L + m). For
 * symmetric delays this labelling and the mirrored one (q_m = F(m)) give the
 * same occupancy law.
 */
class OccupancyModel {
 public:
  static OccupancyModel uniform(int half_width);
  /// q_m = F(-m) for a compact delay law with integer half-width.
  static OccupancyModel from_delay(const DelayDistribution& delay);
  /// Arbitrary arrival-by-offset probabilities, listed for m = -L+1 .. L-1.
  static OccupancyModel from_arrival_probs(std::vector<double> q);

  [[nodiscard]] int half_width() const noexcept { return half_width_; }
  [[nodiscard]] std::size_t offsets() const noexcept { return q_.size(); }
  [[nodiscard]] int offset(std::size_t idx) const noexcept {
    return static_cast<int>(idx) - half_width_ + 1;
  }
  [[nodiscard]] std::span<const double> arrival_probs() const noexcept { return q_; }
  [[nodiscard]] std::vector<double> weights() const;

 private:
  OccupancyModel(int half_width, std::vector<double> q) : half_width_(half_width), q_(std::move(q)) {}

  int half_width_;
  std::vector<double> q_;
};

/// P(|I| = k), k = 0 .. 2L - 1.
struct OccupancyDist {
  std::vector<double> probs;

  [[nodiscard]] int half_width() const noexcept { return static_cast<int>(probs.size() / 2); }
  [[nodiscard]] double prob(int k) const noexcept {
    return k >= 0 && static_cast<std::size_t>(k) < probs.size() ? probs[static_cast<std::size_t>(k)]
                                                                 : 0.0;
  }
  [[nodiscard]] double mean() const noexcept;
};

/// P_k = P_0 e_k(w) with the elementary symmetric polynomials built by
/// e_k <- e_k + w_m e_{k-1}.
OccupancyDist occupancy_dist_dp(const OccupancyModel& model);

inline constexpr int kGinibreMaxHalfWidth = 12;

/**
 * Power-sum expansion of the same law: with S_j = sum_m w_m^j,
 *
 *   P_k = P_0 sum over partitions (j_1 <= ... <= j_l) of k of
 *         (-1)^(k-l) prod S_{j_i} / (j_1 ... j_l * mult_1! ... mult_k!).
 *
 * Terms alternate in sign and grow combinatorially, so models with
 * L > max_half_width are refused (use the DP instead).
 */
OccupancyDist occupancy_dist_ginibre(const OccupancyModel& model,
                                     int max_half_width = kGinibreMaxHalfWidth);

/// Exact P(|I| = 0) = prod_m (1 - q_m) for uniform delays, in rationals.
boost::multiprecision::cpp_rational uniform_empty_probability_exact(int half_width);

/// Unconditioned busy-period length approximation T(alpha) = 1 / P(|I| = -alpha).
/// Infinite when that probability is zero.
double mean_return_time(const OccupancyDist& dist, int alpha);

/// Whether P(|I| = -alpha) < 1 / (2L), the regime where neglecting the
/// conditioning in T(alpha) is expected to be accurate.
bool return_time_reliable(const OccupancyDist& dist, int alpha);

/// Smallest alpha in [floor, 0] with T(alpha) > horizon, scanning upwards;
/// nullopt means a positive alpha (a queue that never empties) is required.
std::optional<int> min_alpha_for_horizon(const OccupancyDist& dist, std::int64_t horizon,
                                         std::optional<int> floor = std::nullopt);

/**
 * Slow birth-death process on alpha in {floor, ..., 0} (floor defaults to
 * -L+1): up with probability P(|I| = -alpha), down with 1 - rho, with no
 * down-move at the floor and no up-move at 0.
 */
struct AlphaChain {
  int floor = 0;
  std::vector<double> up_rates;  ///< lambda_alpha, indexed by alpha - floor
  double down_rate = 0.0;        ///< mu = 1 - rho
  std::vector<double> stationary;

  [[nodiscard]] std::size_t states() const noexcept { return stationary.size(); }
  [[nodiscard]] int alpha(std::size_t idx) const noexcept { return floor + static_cast<int>(idx); }
  [[nodiscard]] double prob(int alpha) const noexcept;
  /// Max residual of pi = pi P over all states.
  [[nodiscard]] double balance_residual() const noexcept;
};

AlphaChain alpha_chain(const OccupancyDist& dist, double rho,
                       std::optional<int> floor = std::nullopt);

/// E(|I| given |I| >= -alpha), the states with a non-negative queue alpha + |I|.
double conditional_occupancy_mean(const OccupancyDist& dist, int alpha);

/// sum_alpha pi_alpha (alpha + E_alpha(|I|)).
double correlated_mean_queue(const OccupancyDist& dist, double rho,
                             std::optional<int> floor = std::nullopt);

/// Queue law at rho = 1 once alpha >= 1 is frozen: P(n = k) = P(|I| = k - alpha).
std::vector<double> stationary_queue_dist_rho1(const OccupancyDist& dist, int alpha);

}  // namespace psra
