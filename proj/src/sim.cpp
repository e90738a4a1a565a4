#include "psra/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <thread>

#include "psra/detail/summation.hpp"
#include "psra/errors.hpp"

namespace psra {
namespace {

using detail::CompensatedSum;

std::int64_t minimum_margin(const SimConfig& c) {
  const auto& d = c.process.delay;
  const double lam = c.process.rate;
  if (d.compact()) return static_cast<std::int64_t>(std::ceil(d.half_width() * lam));
  return static_cast<std::int64_t>(std::ceil((8.0 * d.sigma() + c.service_time) * lam));
}

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

// Batch-means standard error of the mean.
double batch_means_se(const std::vector<double>& batch_sums, std::int64_t batch_size) {
  const auto b = static_cast<double>(batch_sums.size());
  if (batch_sums.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double s : batch_sums) mean += s / static_cast<double>(batch_size);
  mean /= b;
  double ss = 0.0;
  for (double s : batch_sums) {
    const double d = s / static_cast<double>(batch_size) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / (b - 1.0) / b);
}

SimResult run_replication(const SimConfig& c, std::uint64_t stream_id) {
  validate(c);
  const PsraProcess& proc = c.process;
  const std::int64_t H = c.horizon;
  const std::int64_t warmup = effective_warmup(c);
  const std::int64_t margin = effective_index_margin(c);
  const double T = c.service_time;
  const double t_end = c.origin + static_cast<double>(H) * T;

  const std::int64_t first = static_cast<std::int64_t>(std::floor(c.origin * proc.rate)) - margin;
  const std::int64_t last = static_cast<std::int64_t>(std::ceil(t_end * proc.rate)) + margin;

  const RandomStream customers(c.seed, stream_id);
  std::vector<std::int32_t> m(static_cast<std::size_t>(H), 0);
  // Occupancy bookkeeping: kept customers by index, and arrivals before slot 0.
  std::vector<std::int32_t> kept_upto;
  std::int64_t arrived_before_origin = 0;
  if (c.track_occupancy) kept_upto.resize(static_cast<std::size_t>(last - first + 1));

  std::int32_t kept_running = 0;
  for (std::int64_t i = first; i <= last; ++i) {
    const auto at = draw_arrival(proc, i, customers);
    if (at) {
      ++kept_running;
      if (*at < c.origin) {
        ++arrived_before_origin;
      } else if (*at < t_end) {
        auto slot = static_cast<std::int64_t>(std::floor((*at - c.origin) / T));
        slot = std::clamp<std::int64_t>(slot, 0, H - 1);
        ++m[static_cast<std::size_t>(slot)];
      }
    }
    if (c.track_occupancy) kept_upto[static_cast<std::size_t>(i - first)] = kept_running;
  }

  SimResult r;
  r.occupancy_tracked = c.track_occupancy;
  r.total_slots = H;
  r.measured_slots = H - warmup;
  r.arrivals.assign(m.begin() + warmup, m.end());
  if (c.keep_series) r.queue.reserve(static_cast<std::size_t>(r.measured_slots));
  if (c.track_occupancy) r.alpha.reserve(static_cast<std::size_t>(H));

  const int batches = static_cast<int>(std::clamp<std::int64_t>(c.batches, 2, r.measured_slots));
  const std::int64_t batch_size = r.measured_slots / batches;
  std::vector<double> batch_sums(static_cast<std::size_t>(batches), 0.0);
  std::vector<std::int64_t> pmf_counts;

  const auto L = static_cast<std::int64_t>(std::llround(proc.delay.half_width()));
  std::int64_t n = 0;
  std::int64_t arrived_before_slot = arrived_before_origin;
  std::int64_t last_empty = -1;
  std::int64_t last_empty_alpha = 0;
  r.initial_queue = 0;

  for (std::int64_t j = 0; j < H; ++j) {
    const std::int32_t mj = m[static_cast<std::size_t>(j)];
    std::int64_t alpha = 0;
    if (c.track_occupancy) {
      // Everyone with index <= j - L has arrived before j.
      const std::int64_t gone = kept_upto[static_cast<std::size_t>(j - L - first)];
      const std::int64_t occupancy = arrived_before_slot - gone;
      alpha = n - occupancy;
      r.alpha.push_back(static_cast<std::int32_t>(alpha));
    }
    if (j >= warmup) {
      const std::int64_t k = j - warmup;
      if (static_cast<std::size_t>(n) >= pmf_counts.size()) {
        pmf_counts.resize(static_cast<std::size_t>(n) + 1, 0);
      }
      ++pmf_counts[static_cast<std::size_t>(n)];
      if (k / batch_size < batches) batch_sums[static_cast<std::size_t>(k / batch_size)] += n;
      if (c.keep_series) r.queue.push_back(static_cast<std::int32_t>(n));
    }
    if (n == 0) {
      if (c.track_occupancy) {
        if (last_empty >= warmup) {
          r.busy_periods.push_back({static_cast<int>(last_empty_alpha + 1), last_empty,
                                    j - last_empty});
        }
        last_empty_alpha = alpha;
      }
      last_empty = j;
    } else {
      --n;
      ++r.total_services;
    }
    n += mj;
    r.total_arrivals += mj;
    arrived_before_slot += mj;
  }
  r.final_queue = n;

  r.queue_pmf.resize(pmf_counts.size());
  CompensatedSum mean;
  for (std::size_t k = 0; k < pmf_counts.size(); ++k) {
    r.queue_pmf[k] = static_cast<double>(pmf_counts[k]) / static_cast<double>(r.measured_slots);
    mean += static_cast<double>(k) * r.queue_pmf[k];
  }
  r.mean_queue = mean.value();
  r.mean_queue_se = batch_means_se(batch_sums, batch_size);
  r.replication_means = {r.mean_queue};
  r.replication_se = std::numeric_limits<double>::quiet_NaN();
  if (r.arrivals.size() > 10) {
    r.lag1 = empirical_autocovariance(r.arrivals, 1,
                                      static_cast<int>(std::min<std::size_t>(100, r.arrivals.size() / 10)));
  } else {
    r.lag1 = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  return r;
}

}  // namespace

std::int64_t effective_warmup(const SimConfig& c) {
  if (c.warmup) return *c.warmup;
  const auto& d = c.process.delay;
  double scale = d.sigma() * c.process.rate;
  if (d.compact()) scale = std::max(scale, d.half_width() * c.process.rate);
  return static_cast<std::int64_t>(std::ceil(20.0 * std::max(scale, 1.0)));
}

std::int64_t effective_index_margin(const SimConfig& c) {
  if (c.index_margin) return *c.index_margin;
  const std::int64_t minimum = minimum_margin(c);
  if (c.process.delay.compact()) return minimum + 1;
  // Tail-certified reach of the sampler, measured in indices.
  const auto [lo, hi] = relevant_indices(c.process, 0.0, 0.0);
  return std::max(minimum, std::max(-lo, hi)) + 1;
}

void validate(const SimConfig& c) {
  if (c.horizon < 1) throw ConfigError("horizon must be at least one slot");
  if (!(c.service_time > 0.0) || !std::isfinite(c.service_time)) {
    throw ConfigError("service time must be finite and positive");
  }
  if (!std::isfinite(c.origin)) throw ConfigError("slot origin must be finite");
  const std::int64_t warmup = effective_warmup(c);
  if (warmup < 0 || warmup >= c.horizon) {
    throw ConfigError("warmup (" + std::to_string(warmup) + ") must lie in [0, horizon)");
  }
  if (c.index_margin && *c.index_margin < minimum_margin(c)) {
    throw ConfigError("index margin " + std::to_string(*c.index_margin) + " below minimum " +
                      std::to_string(minimum_margin(c)));
  }
  if (c.batches < 2) throw ConfigError("need at least two batches");
  if (c.track_occupancy) {
    const auto& d = c.process.delay;
    if (!d.compact()) throw ConfigError("occupancy tracking needs compact-support delays");
    if (!is_integer(d.half_width())) throw ConfigError("occupancy tracking needs an integer L");
    if (c.process.rate != 1.0 || c.service_time != 1.0 || c.origin != 0.0) {
      throw ConfigError("occupancy tracking needs rate 1, service time 1 and origin 0");
    }
  }
}

double SimResult::mean_arrivals() const noexcept {
  if (arrivals.empty()) return 0.0;
  double s = 0.0;
  for (auto a : arrivals) s += a;
  return s / static_cast<double>(arrivals.size());
}

SimResult run_queue_sim(const SimConfig& config) { return run_replication(config, 0); }

Autocovariance empirical_autocovariance(std::span<const std::int32_t> x, int lag, int blocks) {
  if (lag < 1) throw ConfigError("lag must be positive");
  const auto N = static_cast<std::int64_t>(x.size());
  if (N <= 10 * static_cast<std::int64_t>(lag)) {
    throw ConfigError("series too short for lag " + std::to_string(lag));
  }
  blocks = static_cast<int>(std::clamp<std::int64_t>(blocks, 2, N / 2));

  // Per-block partial sums so each leave-one-block-out estimate is O(1).
  struct Part {
    double n = 0, sx = 0, pairs = 0, sa = 0, sb = 0, sab = 0;
  };
  std::vector<Part> part(static_cast<std::size_t>(blocks));
  Part all;
  const std::int64_t width = (N + blocks - 1) / blocks;
  for (std::int64_t j = 0; j < N; ++j) {
    Part& p = part[static_cast<std::size_t>(j / width)];
    const double xj = x[static_cast<std::size_t>(j)];
    p.n += 1;
    p.sx += xj;
    if (j + lag < N) {
      const double xl = x[static_cast<std::size_t>(j + lag)];
      p.pairs += 1;
      p.sa += xj;
      p.sb += xl;
      p.sab += xj * xl;
    }
  }
  for (const Part& p : part) {
    all.n += p.n;
    all.sx += p.sx;
    all.pairs += p.pairs;
    all.sa += p.sa;
    all.sb += p.sb;
    all.sab += p.sab;
  }
  auto estimate = [](const Part& s) {
    const double mu = s.sx / s.n;
    return (s.sab - mu * (s.sa + s.sb) + mu * mu * s.pairs) / s.n;
  };

  Autocovariance out;
  out.value = estimate(all);
  std::vector<double> loo;
  loo.reserve(part.size());
  for (const Part& p : part) {
    if (p.n == 0) continue;
    Part rest{all.n - p.n, all.sx - p.sx, all.pairs - p.pairs,
              all.sa - p.sa, all.sb - p.sb, all.sab - p.sab};
    loo.push_back(estimate(rest));
  }
  const auto g = static_cast<double>(loo.size());
  double mean = 0.0;
  for (double v : loo) mean += v / g;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  out.se = std::sqrt((g - 1.0) / g * ss);
  return out;
}

std::map<int, BusyPeriodStat> busy_period_stats(const SimResult& result) {
  if (!result.occupancy_tracked) throw ConfigError("busy-period statistics need occupancy tracking");
  std::map<int, std::vector<std::int64_t>> grouped;
  for (const auto& b : result.busy_periods) grouped[b.alpha].push_back(b.length);
  std::map<int, BusyPeriodStat> out;
  for (const auto& [alpha, lengths] : grouped) {
    BusyPeriodStat s;
    s.count = static_cast<std::int64_t>(lengths.size());
    double sum = 0.0;
    for (auto l : lengths) sum += static_cast<double>(l);
    s.mean_length = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (auto l : lengths) ss += (static_cast<double>(l) - s.mean_length) * (static_cast<double>(l) - s.mean_length);
    s.se = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1) / static_cast<double>(s.count))
                       : std::numeric_limits<double>::quiet_NaN();
    out[alpha] = s;
  }
  return out;
}

SimResult replicate(const SimConfig& config, int n_reps, unsigned threads) {
  if (n_reps < 1) throw ConfigError("need at least one replication");
  validate(config);
  if (n_reps == 1) return run_replication(config, 0);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<SimResult> runs(static_cast<std::size_t>(n_reps));
  for (int begin = 0; begin < n_reps; begin += static_cast<int>(threads)) {
    const int end = std::min(n_reps, begin + static_cast<int>(threads));
    std::vector<std::future<SimResult>> pending;
    for (int r = begin; r < end; ++r) {
      pending.push_back(std::async(std::launch::async, run_replication, std::cref(config),
                                   static_cast<std::uint64_t>(r)));
    }
    for (int r = begin; r < end; ++r) runs[static_cast<std::size_t>(r)] = pending[static_cast<std::size_t>(r - begin)].get();
  }

  SimResult out;
  out.replications = n_reps;
  out.occupancy_tracked = config.track_occupancy;
  const double reps = n_reps;
  double se_sq = 0.0;
  double lag_value = 0.0;
  double lag_se_sq = 0.0;
  for (const SimResult& r : runs) {
    if (out.queue_pmf.size() < r.queue_pmf.size()) out.queue_pmf.resize(r.queue_pmf.size(), 0.0);
    for (std::size_t k = 0; k < r.queue_pmf.size(); ++k) out.queue_pmf[k] += r.queue_pmf[k] / reps;
    out.arrivals.insert(out.arrivals.end(), r.arrivals.begin(), r.arrivals.end());
    out.busy_periods.insert(out.busy_periods.end(), r.busy_periods.begin(), r.busy_periods.end());
    out.measured_slots += r.measured_slots;
    out.total_slots += r.total_slots;
    out.total_arrivals += r.total_arrivals;
    out.total_services += r.total_services;
    out.initial_queue += r.initial_queue;
    out.final_queue += r.final_queue;
    out.replication_means.push_back(r.mean_queue);
    se_sq += r.mean_queue_se * r.mean_queue_se;
    lag_value += r.lag1.value / reps;
    lag_se_sq += r.lag1.se * r.lag1.se;
  }
  CompensatedSum mean;
  for (std::size_t k = 0; k < out.queue_pmf.size(); ++k) mean += static_cast<double>(k) * out.queue_pmf[k];
  out.mean_queue = mean.value();
  out.mean_queue_se = std::sqrt(se_sq) / reps;
  out.lag1 = {lag_value, std::sqrt(lag_se_sq) / reps};

  double rep_mean = 0.0;
  for (double v : out.replication_means) rep_mean += v / reps;
  double ss = 0.0;
  for (double v : out.replication_means) ss += (v - rep_mean) * (v - rep_mean);
  out.replication_se = std::sqrt(ss / (reps - 1.0) / reps);
  return out;
}

}  // namespace psra
