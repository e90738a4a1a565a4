#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <span>
#include <vector>

#include "psra/psra.hpp"

namespace psra {

/**
 * Slotted single-server queue with deterministic service fed by PSRA
 * arrivals. Slot j covers [origin + j T, origin + (j+1) T); n(j) is the queue
 * just before the service at the start of slot j and m(j) the arrivals during
 * slot j, so n(j+1) = n(j) - [n(j) > 0] + m(j). The queue starts empty at
 * j = 0; customers are scheduled `index_margin` indices beyond both ends of
 * the horizon so the arrival stream is stationary from the first slot.
 *
 * With track_occupancy (compact delays, rate 1, T = 1, origin 0) the
 * simulator also follows |I_j|, the number of kept customers with index in
 * [j - L + 1, j + L - 1] that arrived before j, and alpha(j) = n(j) - |I_j|.
 */
struct SimConfig {
  explicit SimConfig(PsraProcess p) : process(std::move(p)) {}

  PsraProcess process;
  double service_time = 1.0;
  double origin = 0.0;
  std::int64_t horizon = 0;
  /// Defaults to 20 max(sigma rate, L rate) slots.
  std::optional<std::int64_t> warmup;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> index_margin;
  bool track_occupancy = false;
  /// Keep the per-slot queue series n(j) of the measured window.
  bool keep_series = false;
  /// Batches for the batch-means standard error of the mean queue.
  int batches = 50;
};

std::int64_t effective_warmup(const SimConfig& config);
std::int64_t effective_index_margin(const SimConfig& config);
/// Throws ConfigError when the configuration is unusable.
void validate(const SimConfig& config);

struct Autocovariance {
  double value = 0.0;
  double se = 0.0;
};

/// Busy period between two consecutive empty-queue slots.
struct BusyPeriod {
  int alpha = 0;  ///< alpha during the period: alpha(start) + 1
  std::int64_t start = 0;
  std::int64_t length = 0;
};

struct SimResult {
  /// Empirical law of n(j) over the measured slots.
  std::vector<double> queue_pmf;
  double mean_queue = 0.0;
  double mean_queue_se = 0.0;
  /// m(j) for the measured slots (j >= warmup).
  std::vector<std::int32_t> arrivals;
  Autocovariance lag1;
  /// n(j) for the measured slots, when keep_series is set.
  std::vector<std::int32_t> queue;
  /// alpha(j) for every simulated slot, when tracked.
  std::vector<std::int32_t> alpha;
  std::vector<BusyPeriod> busy_periods;
  bool occupancy_tracked = false;

  std::int64_t measured_slots = 0;
  std::int64_t total_slots = 0;
  std::int64_t total_arrivals = 0;
  std::int64_t total_services = 0;
  std::int64_t initial_queue = 0;
  std::int64_t final_queue = 0;

  int replications = 1;
  std::vector<double> replication_means;
  /// Standard deviation of the replication means over sqrt(n); NaN for one run.
  double replication_se = 0.0;

  [[nodiscard]] double mean_arrivals() const noexcept;
};

SimResult run_queue_sim(const SimConfig& config);

/// Biased (1/N) sample autocovariance at `lag` with a delete-a-block jackknife error.
Autocovariance empirical_autocovariance(std::span<const std::int32_t> series, int lag,
                                        int blocks = 100);

struct BusyPeriodStat {
  std::int64_t count = 0;
  double mean_length = 0.0;
  double se = 0.0;
};

/// Busy periods grouped by their alpha; empty when none completed.
std::map<int, BusyPeriodStat> busy_period_stats(const SimResult& result);

/**
 * Independent replications; replication r draws from RandomStream(seed, r),
 * so replicate(c, 1) equals run_queue_sim(c). Runs on up to `threads` threads
 * (0 = hardware concurrency); the pooled result does not depend on it.
 * Per-slot series (queue, alpha) are concatenated only for a single run.
 */
SimResult replicate(const SimConfig& config, int n_reps, unsigned threads = 0);

}  // namespace psra
