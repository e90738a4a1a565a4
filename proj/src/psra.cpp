#include "psra/psra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psra/detail/summation.hpp"
#include "psra/errors.hpp"

namespace psra {
namespace {

using detail::CompensatedSum;

constexpr double kRateTailBudget = 1e-12;
constexpr double kSampleTailBudget = 1e-9;
constexpr std::int64_t kMaxActiveIndices = 50'000'000;

void require_window(double t, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ConfigError("window length must be finite and positive, got " + std::to_string(T));
  }
  if (!std::isfinite(t)) throw ConfigError("window start must be finite");
}

std::int64_t checked_index(double x) {
  if (!std::isfinite(x) || std::abs(x) > 4e18) {
    throw DomainError("active index set cannot be bounded");
  }
  return static_cast<std::int64_t>(x);
}

}  // namespace

PsraProcess::PsraProcess(double rate_, DelayDistribution delay_, double survival_)
    : rate(rate_), delay(delay_), survival(survival_) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConfigError("arrival rate must be finite and positive, got " + std::to_string(rate));
  }
  if (!(survival > 0.0 && survival <= 1.0)) {
    throw ConfigError("survival probability must lie in (0, 1], got " + std::to_string(survival));
  }
}

double arrival_prob_in_window(const PsraProcess& proc, std::int64_t i, double t, double T) {
  require_window(t, T);
  const double s = proc.scheduled_time(i);
  return proc.delay.interval_prob(t - s, t + T - s);
}

double rate(const PsraProcess& proc, double t) {
  if (!std::isfinite(t)) throw ConfigError("rate: time must be finite");
  const double spacing = 1.0 / proc.rate;
  const auto centre = checked_index(std::floor(t * proc.rate));
  CompensatedSum sum;
  sum += proc.delay.pdf(t - proc.scheduled_time(centre));
  // Walk outwards on each side until the certified remainder is negligible.
  for (int side : {-1, +1}) {
    for (std::int64_t k = 1;; ++k) {
      const std::int64_t i = centre - side * k;
      const double d = side * (t - proc.scheduled_time(i));
      if (d > 0.0 && proc.delay.lattice_tail_density(d, spacing) < kRateTailBudget / 2) break;
      sum += proc.delay.pdf(t - proc.scheduled_time(i));
    }
  }
  return proc.survival * sum.value();
}

WindowProbabilities window_probabilities(const PsraProcess& proc, double t, double T,
                                         double eps) {
  require_window(t, T);
  const double lam = proc.rate;
  const double spacing = 1.0 / lam;
  const DelayDistribution& d = proc.delay;

  std::int64_t lo = 0;
  std::int64_t hi = 0;
  double excluded = 0.0;
  if (d.compact()) {
    lo = checked_index(std::floor((t - d.half_width()) * lam));
    hi = checked_index(std::ceil((t + T + d.half_width()) * lam));
  } else {
    double reach = 8.0 * d.sigma() + T;
    for (;;) {
      lo = checked_index(std::floor((t - reach) * lam));
      hi = checked_index(std::ceil((t + T + reach) * lam));
      // Index lo - 1 sits at distance t - (lo - 1)/lam below the window, and
      // hi + 1 at (hi + 1)/lam - (t + T) above it.
      const double below = d.lattice_tail_mass(t - proc.scheduled_time(lo - 1), spacing);
      const double above = d.lattice_tail_mass(proc.scheduled_time(hi + 1) - t - T, spacing);
      excluded = proc.survival * (below + above);
      if (excluded < eps) break;
      reach += d.sigma();
    }
  }
  if (hi - lo + 1 > kMaxActiveIndices) throw DomainError("active index set too large");

  WindowProbabilities out;
  out.excluded_mass = excluded;
  out.probs.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) {
    const double s = proc.scheduled_time(i);
    out.probs.push_back(proc.survival * d.interval_prob(t - s, t + T - s));
  }
  // Drop exact zeros at both ends (compact support).
  auto first = std::find_if(out.probs.begin(), out.probs.end(), [](double p) { return p > 0.0; });
  auto last = std::find_if(out.probs.rbegin(), out.probs.rend(), [](double p) { return p > 0.0; });
  if (first == out.probs.end()) {
    out.probs.clear();
    out.first_index = lo;
    return out;
  }
  out.first_index = lo + (first - out.probs.begin());
  out.probs.erase(last.base(), out.probs.end());
  out.probs.erase(out.probs.begin(), first);
  return out;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> p) {
  std::vector<double> q{1.0};
  q.reserve(p.size() + 1);
  for (double pk : p) {
    if (!(pk >= 0.0 && pk <= 1.0)) throw DomainError("success probability outside [0, 1]");
    if (pk == 0.0) continue;
    q.push_back(0.0);
    for (std::size_t k = q.size() - 1; k > 0; --k) {
      q[k] = q[k] * (1.0 - pk) + q[k - 1] * pk;
    }
    q[0] *= 1.0 - pk;
  }
  return q;
}

SlotCountDistribution slot_count_dist(const PsraProcess& proc, double t, double T, double eps) {
  if (!(eps > 0.0 && eps <= 1e-6)) throw ConfigError("slot_count_dist: eps must lie in (0, 1e-6]");
  const WindowProbabilities w = window_probabilities(proc, t, T, eps);

  SlotCountDistribution out;
  out.active_indices = w.probs.size();
  out.excluded_mass = w.excluded_mass;
  CompensatedSum mean;
  CompensatedSum var;
  for (double p : w.probs) {
    mean += p;
    var += p * (1.0 - p);
  }
  out.mean = mean.value();
  out.variance = var.value();

  out.probs = poisson_binomial_pmf(w.probs);
  // Trim the far right tail once it carries less than 1e-16 in total.
  double tail = 0.0;
  while (out.probs.size() > 1 && tail + out.probs.back() < 1e-16) {
    tail += out.probs.back();
    out.probs.pop_back();
  }
  out.truncation_residual = tail;
  return out;
}

SlotMoments slot_moments(const PsraProcess& proc, double t, double T) {
  const WindowProbabilities w = window_probabilities(proc, t, T);
  CompensatedSum mean;
  CompensatedSum var;
  for (double p : w.probs) {
    mean += p;
    var += p * (1.0 - p);
  }
  return {mean.value(), var.value()};
}

double slot_covariance(const PsraProcess& proc, double t, double T) {
  // Indices relevant to the union window also cover both halves.
  const WindowProbabilities w = window_probabilities(proc, t, 2.0 * T);
  const double g2 = proc.survival * proc.survival;
  CompensatedSum sum;
  for (std::size_t k = 0; k < w.probs.size(); ++k) {
    const auto i = w.first_index + static_cast<std::int64_t>(k);
    const double s = proc.scheduled_time(i);
    const double p1 = proc.delay.interval_prob(t - s, t + T - s);
    const double p2 = proc.delay.interval_prob(t + T - s, t + 2.0 * T - s);
    sum += p1 * p2;
  }
  return -g2 * sum.value();
}

double tv_distance_to_poisson(const PsraProcess& proc, double t, double T) {
  const SlotCountDistribution q = slot_count_dist(proc, t, T);
  const double mu = proc.survival * proc.rate * T;
  auto poisson = [mu](std::size_t n) {
    const auto x = static_cast<double>(n);
    return std::exp(x * std::log(mu) - mu - std::lgamma(x + 1.0));
  };
  CompensatedSum tv;
  std::size_t n = 0;
  double poisson_cdf = 0.0;
  for (;; ++n) {
    const double pn = poisson(n);
    const double qn = n < q.probs.size() ? q.probs[n] : 0.0;
    tv += std::abs(qn - pn);
    poisson_cdf += pn;
    if (n + 1 >= q.probs.size() && static_cast<double>(n) > mu && 1.0 - poisson_cdf < 1e-12) break;
  }
  return std::min(2.0, tv.value());
}

std::optional<double> draw_arrival(const PsraProcess& proc, std::int64_t i,
                                   const RandomStream& customers) {
  RandomStream draws = customers.substream(i);
  const bool kept = draws.uniform() < proc.survival;
  if (!kept) return std::nullopt;
  return proc.scheduled_time(i) + proc.delay.sample(draws);
}

std::pair<std::int64_t, std::int64_t> relevant_indices(const PsraProcess& proc, double t0,
                                                       double t1) {
  const DelayDistribution& d = proc.delay;
  double margin = d.half_width();
  if (!d.compact()) {
    margin = 8.0 * d.sigma();
    while (2.0 * proc.survival * d.lattice_tail_mass(margin, 1.0 / proc.rate) >= kSampleTailBudget) {
      margin += d.sigma();
    }
  }
  return {checked_index(std::floor((t0 - margin) * proc.rate)),
          checked_index(std::ceil((t1 + margin) * proc.rate))};
}

std::vector<double> sample_arrivals(const PsraProcess& proc, double t0, double t1,
                                    const RandomStream& customers) {
  if (!(t0 < t1)) throw ConfigError("sample_arrivals: need t0 < t1");
  const auto [first, last] = relevant_indices(proc, t0, t1);
  std::vector<double> times;
  for (std::int64_t i = first; i <= last; ++i) {
    if (const auto at = draw_arrival(proc, i, customers); at && *at >= t0 && *at < t1) {
      times.push_back(*at);
    }
  }
  std::sort(times.begin(), times.end());
  return times;
}

}  // namespace psra
