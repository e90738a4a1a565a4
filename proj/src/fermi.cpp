#include "psra/fermi.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "psra/detail/summation.hpp"
#include "psra/errors.hpp"

namespace psra {
namespace {

using detail::CompensatedSum;

void require_alpha_in_range(const OccupancyDist& dist, int alpha) {
  const int deepest = -(static_cast<int>(dist.probs.size()) - 1);
  if (alpha > 0 || alpha < deepest) {
    throw ConfigError("alpha " + std::to_string(alpha) + " outside [" + std::to_string(deepest) +
                      ", 0]");
  }
}

int resolve_floor(const OccupancyDist& dist, std::optional<int> floor) {
  const int f = floor.value_or(-dist.half_width() + 1);
  require_alpha_in_range(dist, f);
  return f;
}

// Visits every partition of n into parts <= max_part, in non-increasing order.
void for_each_partition(int n, int max_part, std::vector<int>& parts,
                        const std::function<void(const std::vector<int>&)>& visit) {
  if (n == 0) {
    visit(parts);
    return;
  }
  for (int j = std::min(n, max_part); j >= 1; --j) {
    parts.push_back(j);
    for_each_partition(n - j, j, parts, visit);
    parts.pop_back();
  }
}

}  // namespace

OccupancyModel OccupancyModel::uniform(int half_width) {
  if (half_width < 1) throw ConfigError("occupancy model needs L >= 1");
  std::vector<double> q;
  const double two_l = 2.0 * half_width;
  for (int m = -half_width + 1; m <= half_width - 1; ++m) {
    q.push_back(static_cast<double>(half_width - m) / two_l);
  }
  return {half_width, std::move(q)};
}

OccupancyModel OccupancyModel::from_delay(const DelayDistribution& delay) {
  if (!delay.compact()) throw ConfigError("occupancy model needs a compact-support delay law");
  const double l = delay.half_width();
  if (std::abs(l - std::round(l)) > 1e-12 || l < 1.0) {
    throw ConfigError("occupancy model needs an integer half-width L >= 1");
  }
  const int half_width = static_cast<int>(std::round(l));
  std::vector<double> q;
  for (int m = -half_width + 1; m <= half_width - 1; ++m) q.push_back(delay.cdf(-m));
  return from_arrival_probs(std::move(q));
}

OccupancyModel OccupancyModel::from_arrival_probs(std::vector<double> q) {
  if (q.empty() || q.size() % 2 == 0) {
    throw ConfigError("need 2L - 1 arrival probabilities, got " + std::to_string(q.size()));
  }
  for (double x : q) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("arrival probabilities must lie in (0, 1)");
  }
  const int half_width = static_cast<int>((q.size() + 1) / 2);
  return {half_width, std::move(q)};
}

std::vector<double> OccupancyModel::weights() const {
  std::vector<double> w;
  w.reserve(q_.size());
  for (double x : q_) w.push_back(x / (1.0 - x));
  return w;
}

double OccupancyDist::mean() const noexcept {
  CompensatedSum s;
  for (std::size_t k = 0; k < probs.size(); ++k) s += static_cast<double>(k) * probs[k];
  return s.value();
}

OccupancyDist occupancy_dist_dp(const OccupancyModel& model) {
  double empty = 1.0;
  for (double q : model.arrival_probs()) empty *= 1.0 - q;

  std::vector<double> e{1.0};
  e.reserve(model.offsets() + 1);
  for (double w : model.weights()) {
    e.push_back(0.0);
    for (std::size_t k = e.size() - 1; k > 0; --k) e[k] += w * e[k - 1];
  }
  OccupancyDist out;
  out.probs.reserve(e.size());
  for (double ek : e) out.probs.push_back(empty * ek);
  return out;
}

OccupancyDist occupancy_dist_ginibre(const OccupancyModel& model, int max_half_width) {
  if (model.half_width() > max_half_width) {
    throw DomainError("power-sum expansion refused for L = " + std::to_string(model.half_width()) +
                      " > " + std::to_string(max_half_width) + "; use the DP evaluator");
  }
  const int levels = static_cast<int>(model.offsets());
  const std::vector<double> w = model.weights();

  // power[j] = sum_m w_m^j
  std::vector<long double> power(static_cast<std::size_t>(levels) + 1, 0.0L);
  for (double wm : w) {
    long double x = 1.0L;
    for (int j = 1; j <= levels; ++j) {
      x *= wm;
      power[static_cast<std::size_t>(j)] += x;
    }
  }
  long double empty = 1.0L;
  for (double q : model.arrival_probs()) empty *= 1.0L - q;

  OccupancyDist out;
  out.probs.assign(static_cast<std::size_t>(levels) + 1, 0.0);
  std::vector<int> parts;
  for (int k = 0; k <= levels; ++k) {
    long double total = 0.0L;
    for_each_partition(k, k, parts, [&](const std::vector<int>& js) {
      long double term = 1.0L;
      long double denom = 1.0L;
      // Parts arrive grouped (non-increasing), so multiplicities are run lengths.
      std::size_t run = 0;
      for (std::size_t i = 0; i < js.size(); ++i) {
        term *= power[static_cast<std::size_t>(js[i])];
        denom *= js[i];
        run = (i > 0 && js[i] == js[i - 1]) ? run + 1 : 1;
        denom *= static_cast<long double>(run);
      }
      const bool negative = (k - static_cast<int>(js.size())) % 2 != 0;
      total += (negative ? -term : term) / denom;
    });
    out.probs[static_cast<std::size_t>(k)] = static_cast<double>(empty * total);
  }
  return out;
}

boost::multiprecision::cpp_rational uniform_empty_probability_exact(int half_width) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (half_width < 1) throw ConfigError("occupancy model needs L >= 1");
  cpp_rational p = 1;
  const cpp_int two_l = 2 * half_width;
  for (int m = -half_width + 1; m <= half_width - 1; ++m) {
    const cpp_rational q(cpp_int(half_width - m), two_l);
    p *= 1 - q;
  }
  return p;
}

double mean_return_time(const OccupancyDist& dist, int alpha) {
  require_alpha_in_range(dist, alpha);
  const double p = dist.prob(-alpha);
  return p > 0.0 ? 1.0 / p : std::numeric_limits<double>::infinity();
}

bool return_time_reliable(const OccupancyDist& dist, int alpha) {
  require_alpha_in_range(dist, alpha);
  return dist.prob(-alpha) < 1.0 / (2.0 * dist.half_width());
}

std::optional<int> min_alpha_for_horizon(const OccupancyDist& dist, std::int64_t horizon,
                                         std::optional<int> floor) {
  if (horizon < 1) throw ConfigError("horizon must be at least one operation");
  for (int alpha = resolve_floor(dist, floor); alpha <= 0; ++alpha) {
    if (mean_return_time(dist, alpha) > static_cast<double>(horizon)) return alpha;
  }
  return std::nullopt;
}

double AlphaChain::prob(int a) const noexcept {
  const int idx = a - floor;
  return idx >= 0 && static_cast<std::size_t>(idx) < stationary.size()
             ? stationary[static_cast<std::size_t>(idx)]
             : 0.0;
}

double AlphaChain::balance_residual() const noexcept {
  const std::size_t n = stationary.size();
  auto down = [&](std::size_t i) { return i == 0 ? 0.0 : down_rate; };
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double next = stationary[i] * (1.0 - up_rates[i] - down(i));
    if (i > 0) next += stationary[i - 1] * up_rates[i - 1];
    if (i + 1 < n) next += stationary[i + 1] * down(i + 1);
    worst = std::max(worst, std::abs(next - stationary[i]));
  }
  return worst;
}

AlphaChain alpha_chain(const OccupancyDist& dist, double rho, std::optional<int> floor) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("alpha chain needs 0 < rho < 1");
  AlphaChain chain;
  chain.floor = resolve_floor(dist, floor);
  chain.down_rate = 1.0 - rho;
  const auto n = static_cast<std::size_t>(-chain.floor + 1);
  chain.up_rates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    chain.up_rates[i] = i + 1 == n ? 0.0 : dist.prob(-chain.alpha(i));
  }
  // Detailed balance: pi_{a+1} mu = pi_a lambda_a.
  chain.stationary.resize(n);
  chain.stationary[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    chain.stationary[i] = chain.stationary[i - 1] * chain.up_rates[i - 1] / chain.down_rate;
  }
  CompensatedSum z;
  for (double p : chain.stationary) z += p;
  for (double& p : chain.stationary) p /= z.value();
  return chain;
}

double conditional_occupancy_mean(const OccupancyDist& dist, int alpha) {
  if (alpha > 0) alpha = 0;
  CompensatedSum num;
  CompensatedSum den;
  for (std::size_t k = static_cast<std::size_t>(-alpha); k < dist.probs.size(); ++k) {
    num += static_cast<double>(k) * dist.probs[k];
    den += dist.probs[k];
  }
  if (!(den.value() > 0.0)) {
    throw DomainError("no occupancy state with |I| >= " + std::to_string(-alpha));
  }
  return num.value() / den.value();
}

double correlated_mean_queue(const OccupancyDist& dist, double rho, std::optional<int> floor) {
  const AlphaChain chain = alpha_chain(dist, rho, floor);
  CompensatedSum n;
  for (std::size_t i = 0; i < chain.states(); ++i) {
    const int a = chain.alpha(i);
    n += chain.stationary[i] * (a + conditional_occupancy_mean(dist, a));
  }
  return n.value();
}

std::vector<double> stationary_queue_dist_rho1(const OccupancyDist& dist, int alpha) {
  if (alpha < 1) throw ConfigError("a frozen queue needs alpha >= 1");
  std::vector<double> out(static_cast<std::size_t>(alpha) + dist.probs.size(), 0.0);
  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    out[static_cast<std::size_t>(alpha) + k] = dist.probs[k];
  }
  return out;
}

}  // namespace psra
