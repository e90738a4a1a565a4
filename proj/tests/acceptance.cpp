// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "psra/errors.hpp"
#include "psra/expcli.hpp"
#include "psra/fermi.hpp"
#include "psra/qanalytic.hpp"
#include "psra/sim.hpp"

namespace ex = psra::expcli;
using psra::DelayDistribution;
using psra::PsraProcess;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += "; over the " + fmt("%.0f", budget_s) + " s budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s  criterion %2d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

Outcome table_criterion(const char* command, std::size_t cells) {
  const auto cfg = ex::defaults(command);
  const auto table = ex::run(cfg);
  const auto rep = ex::check(cfg, table);
  const bool ok = rep.ok() && rep.compared == cells;
  return {ok, std::to_string(rep.compared) + "/" + std::to_string(cells) + " cells, max error " +
                  fmt("%.2e", rep.max_error) + ", tolerance " +
                  fmt("%.0e", ex::reference_tolerance(command))};
}

double grid_value(const ex::Table& t, double sigma, double time) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (std::abs(t.number(r, "sigma") - sigma) < 1e-9 && std::abs(t.number(r, "t") - time) < 1e-9) {
      return t.number(r, t.columns[2]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Uniform[-h, h] window probability, computed from the geometry alone.
double uniform_window_prob(double h, double centre, double t, double T) {
  const double lo = std::max(t, centre - h);
  const double hi = std::min(t + T, centre + h);
  return hi > lo ? (hi - lo) / (2.0 * h) : 0.0;
}

}  // namespace

int main() {
  criterion(1, "instantaneous rate grid, 9 x 11, within 1e-6", 1.0, [] {
    Outcome o = table_criterion("rate-table", 99);
    const auto t = ex::rate_table(ex::defaults("rate-table"));
    const bool anchors = std::abs(grid_value(t, 0.2, 0.0) - 1.994726) < 1e-6 &&
                         std::abs(grid_value(t, 0.3, 0.5) - 0.663191) < 1e-6;
    o.pass = o.pass && anchors;
    return o;
  });

  criterion(2, "traffic intensity grid at T = 0.9 within 1e-6", 1.0, [] {
    Outcome o = table_criterion("intensity-table", 90);
    const auto t = ex::intensity_table(ex::defaults("intensity-table"));
    o.pass = o.pass && std::abs(grid_value(t, 0.2, 0.0) - 0.808534) < 1e-6;
    return o;
  });

  criterion(3, "independence-approximation queue grid within 1e-4", 1.0, [] {
    Outcome o = table_criterion("queue-table", 110);
    const auto t = psra::independence_approx_mean(PsraProcess{1.0, DelayDistribution::gaussian(0.5)}, 0.0, 0.9);
    const auto u = psra::independence_approx_mean(PsraProcess{1.0, DelayDistribution::gaussian(1.0)}, 0.5, 0.9);
    o.pass = o.pass && std::abs(t - 3.03548) < 1e-4 && std::abs(u - 3.84452) < 1e-4;
    return o;
  });

  criterion(4, "M/D/1 closed form and divergence", 1.0, [] {
    const double v = psra::mdone_mean(0.9);
    const double ulps = std::abs(v - 4.95) / (std::nextafter(4.95, 5.0) - 4.95);
    int raised = 0;
    for (double rho : {1.0, 1.5}) {
      try {
        psra::mdone_mean(rho);
      } catch (const psra::DomainError&) {
        ++raised;
      }
    }
    return Outcome{ulps <= 2.0 && raised == 2,
                   "rho=0.9 -> " + ex::format_number(v) + " (" + fmt("%.0f", ulps) +
                       " ulp), divergence raised " + std::to_string(raised) + "/2"};
  });

  criterion(5, "GI/D/1 recursion matches the plug-in mean", 1.0, [] {
    const PsraProcess proc{1.0, DelayDistribution::gaussian(0.5)};
    double worst_mean = 0.0, worst_sum = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const double t = k / 10.0;
      const auto d = psra::gidone_stationary(psra::slot_count_dist(proc, t, 0.9));
      double total = d.residual;
      for (double p : d.probs) total += p;
      worst_sum = std::max(worst_sum, std::abs(total - 1.0));
      worst_mean = std::max(worst_mean, std::abs(d.mean - psra::independence_approx_mean(proc, t, 0.9)));
    }
    return Outcome{worst_mean < 1e-6 && worst_sum <= 1e-9,
                   "11 phases, max |mean diff| " + fmt("%.1e", worst_mean) + ", max |sum - 1| " +
                       fmt("%.1e", worst_sum)};
  });

  criterion(6, "Poisson-binomial law equals subset enumeration", 10.0, [] {
    psra::RandomStream rng(20240601);
    int accepted = 0;
    double worst = 0.0;
    while (accepted < 200) {
      const double h = 0.1 + 2.9 * rng.uniform();
      const double lam = 0.5 + 1.5 * rng.uniform();
      const double T = 0.05 + 1.95 * rng.uniform();
      const double gamma = 0.1 + 0.9 * rng.uniform();
      const double t = 10.0 * (rng.uniform() - 0.5);
      std::vector<double> p;
      const auto lo = static_cast<std::int64_t>(std::floor((t - h) * lam)) - 1;
      const auto hi = static_cast<std::int64_t>(std::ceil((t + T + h) * lam)) + 1;
      for (std::int64_t i = lo; i <= hi; ++i) {
        const double q = uniform_window_prob(h, static_cast<double>(i) / lam, t, T);
        if (q > 0.0) p.push_back(gamma * q);
      }
      if (p.empty() || p.size() > 12) continue;
      ++accepted;
      const auto brute = oracle::subset_enumeration_pmf(p);
      const auto got = psra::slot_count_dist(PsraProcess{lam, DelayDistribution::uniform(h), gamma}, t, T);
      for (std::size_t n = 0; n < std::max(brute.size(), got.probs.size()); ++n) {
        const double a = n < brute.size() ? brute[n] : 0.0;
        const double b = n < got.probs.size() ? got.probs[n] : 0.0;
        worst = std::max(worst, std::abs(a - b));
      }
    }
    return Outcome{worst <= 1e-12, "200 parameter sets, max |diff| " + fmt("%.1e", worst)};
  });

  criterion(7, "occupancy law: DP, enumeration, power sums, exact P_0", 10.0, [] {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    double worst_enum = 0.0, worst_gin = 0.0;
    auto compare = [&](const psra::OccupancyModel& m) {
      const auto dp = psra::occupancy_dist_dp(m);
      const auto gin = psra::occupancy_dist_ginibre(m);
      const auto brute = oracle::occupancy_enumeration(m.arrival_probs());
      for (std::size_t k = 0; k < dp.probs.size(); ++k) {
        worst_enum = std::max(worst_enum, std::abs(dp.probs[k] - brute[k]));
        worst_gin = std::max(worst_gin, std::abs(dp.probs[k] - gin.probs[k]));
      }
    };
    for (int l = 1; l <= 6; ++l) compare(psra::OccupancyModel::uniform(l));
    psra::RandomStream rng(7);
    for (int k = 0; k < 100; ++k) {
      const int l = 1 + static_cast<int>(rng.uniform() * 6);
      std::vector<double> q(static_cast<std::size_t>(2 * l - 1));
      for (double& x : q) x = 0.05 + 0.9 * rng.uniform();
      compare(psra::OccupancyModel::from_arrival_probs(q));
    }
    int exact = 0;
    for (int l = 1; l <= 10; ++l) {
      cpp_int num = 1;
      for (int k = 2; k <= 2 * l; ++k) num *= k;
      cpp_int den = 1;
      for (int k = 0; k < 2 * l; ++k) den *= 2 * l;
      exact += psra::uniform_empty_probability_exact(l) == cpp_rational(num, den) ? 1 : 0;
    }
    return Outcome{worst_enum <= 1e-12 && worst_gin <= 1e-9 && exact == 10,
                   "enumeration " + fmt("%.1e", worst_enum) + ", power sums " + fmt("%.1e", worst_gin) +
                       ", exact P_0 " + std::to_string(exact) + "/10"};
  });

  criterion(8, "negative lag-1 covariance, analytic and simulated", 60.0, [] {
    psra::RandomStream rng(8);
    int positive = 0;
    for (int k = 0; k < 1000; ++k) {
      const double sigma = 0.05 + 3.0 * rng.uniform();
      const double lam = 0.3 + 2.0 * rng.uniform();
      const double gamma = 0.05 + 0.95 * rng.uniform();
      const double T = 0.05 + 2.0 * rng.uniform();
      const double t = 3.0 * rng.uniform();
      const PsraProcess proc = k % 2 ? PsraProcess{lam, DelayDistribution::gaussian(sigma), gamma}
                                     : PsraProcess{lam, DelayDistribution::uniform(sigma * std::sqrt(3.0)), gamma};
      positive += psra::slot_covariance(proc, t, T) > 0.0 ? 1 : 0;
    }
    const PsraProcess proc{1.0, DelayDistribution::gaussian(1.0)};
    psra::SimConfig c{proc};
    c.horizon = 10'000'000;
    c.seed = 88;
    const auto r = psra::run_queue_sim(c);
    const double analytic = psra::slot_covariance(proc, 0.0, 1.0);
    const double z = (r.lag1.value - analytic) / r.lag1.se;
    return Outcome{positive == 0 && r.lag1.value < 0.0 && std::abs(z) < 3.0,
                   std::to_string(positive) + "/1000 positive; simulated " + ex::format_number(r.lag1.value) +
                       " +- " + fmt("%.1e", r.lag1.se) + " vs analytic " + ex::format_number(analytic) +
                       " (z = " + fmt("%.2f", z) + ")"};
  });

  criterion(9, "total variation distance to Poisson shrinks with sigma", 5.0, [] {
    std::vector<double> tv;
    std::string detail = "TV:";
    for (double sigma : {0.3, 0.5, 1.0, 2.0}) {
      tv.push_back(psra::tv_distance_to_poisson(PsraProcess{1.0, DelayDistribution::gaussian(sigma)}, 0.0, 1.0));
      detail += " " + fmt("%.3e", tv.back());
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < tv.size(); ++k) decreasing = decreasing && tv[k] < tv[k - 1];
    detail += decreasing ? "; strictly decreasing" : "; NOT decreasing";
    detail += tv.back() < 0.01 ? "; TV(2) < 0.01" : "; TV(2) >= 0.01";
    return Outcome{decreasing && tv.back() < 0.01, detail};
  });

  criterion(10, "alpha conservation at rho = 1, uniform L = 3, 10^6 slots", 30.0, [] {
    psra::SimConfig c{PsraProcess{1.0, DelayDistribution::uniform(3.0)}};
    c.horizon = 1'000'000;
    c.warmup = 0;
    c.seed = 10;
    c.track_occupancy = true;
    c.keep_series = true;
    const auto r = psra::run_queue_sim(c);
    std::int64_t violations = 0, increments = 0;
    for (std::size_t j = 0; j + 1 < r.alpha.size(); ++j) {
      const int step = r.alpha[j + 1] - r.alpha[j];
      increments += step == 1;
      violations += step != (r.queue[j] == 0 ? 1 : 0);
    }
    return Outcome{violations == 0 && r.alpha.size() == 1'000'000,
                   std::to_string(violations) + " violations, " + std::to_string(increments) +
                       " empty-slot increments"};
  });

  criterion(11, "correlated approximation within 10% at L = 5", 300.0, [] {
    auto cfg = ex::defaults("fig-correlated");
    cfg.rhos = {0.95, 0.98, 0.99};
    cfg.horizon = 2'000'000;
    cfg.reps = 8;
    cfg.seed = 11;
    const auto t = ex::fig_correlated(cfg);
    bool ok = true;
    std::string detail;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double sim = t.number(r, "simulated_mean");
      const double rel = std::abs(t.number(r, "correlated_approx") - sim) / sim;
      ok = ok && rel < 0.10;
      detail += "rho " + ex::format_number(t.number(r, "rho")) + ": sim " + fmt("%.4f", sim) + ", rel err " +
                fmt("%.3f", rel) + "; ";
    }
    const double sim99 = t.number(2, "simulated_mean");
    const double excess = t.number(2, "uncorrelated_valore") / sim99 - 1.0;
    ok = ok && excess > 0.25;
    detail += "independence excess at 0.99: " + fmt("%.0f", 100 * excess) + "%";
    return Outcome{ok, detail};
  });

  criterion(12, "independence approximation vs simulation ordering", 300.0, [] {
    auto cfg = ex::defaults("fig-independence");
    cfg.horizon = 1'000'000;
    cfg.reps = 8;
    cfg.seed = 12;
    cfg.rhos = {0.9};
    cfg.sigmas = {0.5, 1.0};
    const auto high = ex::fig_independence(cfg);
    cfg.rhos = {0.5};
    cfg.sigmas = {2.0};
    const auto low = ex::fig_independence(cfg);
    bool above = true;
    std::string detail;
    for (std::size_t r = 0; r < high.rows.size(); ++r) {
      const double gap = high.number(r, "analytic_valore") - high.number(r, "simulated_mean");
      const double z = gap / high.number(r, "sim_se");
      above = above && z > 3.0;
      detail += "rho 0.9 sigma " + ex::format_number(high.number(r, "sigma")) + ": gap " + fmt("%.3f", gap) +
                " (" + fmt("%.0f", z) + " se); ";
    }
    const double gap = low.number(0, "analytic_valore") - low.number(0, "simulated_mean");
    const double z = gap / low.number(0, "sim_se");
    const bool agree = std::abs(z) < 3.0;
    detail += "rho 0.5 sigma 2: analytic " + fmt("%.4f", low.number(0, "analytic_valore")) + ", simulated " +
              fmt("%.4f", low.number(0, "simulated_mean")) + " +- " + fmt("%.4f", low.number(0, "sim_se")) +
              " (" + fmt("%.0f", z) + " se)" + (above ? "; ordering holds" : "; ordering FAILS") +
              (agree ? "" : "; agreement FAILS");
    return Outcome{above && agree, detail};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
