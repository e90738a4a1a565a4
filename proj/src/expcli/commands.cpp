#include <algorithm>
#include <cmath>
#include <sstream>

#include "psra/errors.hpp"
#include "psra/expcli.hpp"
#include "psra/fermi.hpp"
#include "psra/qanalytic.hpp"
#include "psra/sim.hpp"

namespace psra::expcli {
namespace {

std::vector<double> tenths(int from, int to) {
  std::vector<double> v;
  for (int k = from; k <= to; ++k) v.push_back(k / 10.0);
  return v;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) {
    if (!s.empty()) s += ' ';
    s += format_number(x);
  }
  return s;
}

void require_nonempty(const std::vector<double>& xs, const char* what) {
  if (xs.empty()) throw ConfigError(std::string("empty ") + what + " grid");
}

void require_load(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1), got " + format_number(rho));
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t point) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (point + 1));
}

double sim_se(const SimResult& r) {
  return r.replications > 1 ? r.replication_se : r.mean_queue_se;
}

// Table commands share the (sigma, t) sweep.
template <class F>
Table grid_table(const ExperimentConfig& cfg, const char* value_column, F&& value) {
  require_nonempty(cfg.sigmas, "sigma");
  require_nonempty(cfg.times, "t");
  Table out;
  out.columns = {"sigma", "t", value_column};
  for (double s : cfg.sigmas) {
    const PsraProcess proc{cfg.rate, DelayDistribution::gaussian(s), cfg.survival};
    for (double t : cfg.times) out.rows.push_back({s, t, value(proc, t)});
  }
  return out;
}

DelayDistribution sim_delay(const ExperimentConfig& cfg) {
  if (cfg.family == "gaussian") return DelayDistribution::gaussian(cfg.sigma);
  if (cfg.family == "uniform") return DelayDistribution::uniform(cfg.half_width);
  throw ConfigError("unknown delay family '" + cfg.family + "' (gaussian or uniform)");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"rate-table",     "intensity-table", "queue-table",
                                              "fig-independence", "fig-correlated", "fermi",
                                              "simulate"};
  return names;
}

ExperimentConfig defaults(std::string_view command) {
  ExperimentConfig c;
  c.command = std::string(command);
  if (command == "rate-table") {
    c.sigmas = tenths(2, 10);
    c.times = tenths(0, 10);
  } else if (command == "intensity-table") {
    c.sigmas = tenths(2, 10);
    c.times = tenths(0, 9);
  } else if (command == "queue-table") {
    c.sigmas = tenths(1, 10);
    c.times = tenths(0, 10);
  } else if (command == "fig-independence") {
    c.rhos = {0.5, 0.7, 0.9};
    c.sigmas = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
    c.origin = 0.5;
    c.horizon = 400000;
    c.reps = 4;
  } else if (command == "fig-correlated") {
    c.rhos = {0.90, 0.95, 0.98, 0.99};
    c.half_width = 5;
    c.horizon = 1000000;
    c.reps = 8;
  } else if (command == "fermi") {
    c.half_width = 5;
    c.rho = 0.95;
    c.day = 1000;
  } else if (command == "simulate") {
    c.horizon = 10000;
    c.reps = 1;
  } else {
    throw ConfigError("unknown command '" + std::string(command) + "'");
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&](std::string k, std::string v) { kv.emplace_back(std::move(k), std::move(v)); };
  const std::string& cmd = c.command;
  if (cmd == "rate-table" || cmd == "intensity-table" || cmd == "queue-table") {
    add("sigma", join(c.sigmas));
    add("t", join(c.times));
    add("rate", format_number(c.rate));
    add("survival", format_number(c.survival));
    if (cmd != "rate-table") add("service_time", format_number(c.service_time));
  } else if (cmd == "fig-independence") {
    add("rho", join(c.rhos));
    add("sigma", join(c.sigmas));
    add("rate", format_number(c.rate));
    add("origin", format_number(c.origin));
    add("mode", "load (survival 1, service_time = rho / rate)");
  } else if (cmd == "fig-correlated") {
    add("rho", join(c.rhos));
    add("L", std::to_string(c.half_width));
    add("mode", "thinning (rate 1, service_time 1, survival = rho)");
  } else if (cmd == "fermi") {
    add("L", std::to_string(c.half_width));
    add("rho", format_number(c.rho));
    add("day", std::to_string(c.day));
    add("alpha_floor", c.alpha_floor ? std::to_string(*c.alpha_floor) : "-L+1");
  } else if (cmd == "simulate") {
    add("family", c.family);
    add(c.family == "uniform" ? "L" : "sigma",
        c.family == "uniform" ? std::to_string(c.half_width) : format_number(c.sigma));
    add("rate", format_number(c.rate));
    add("survival", format_number(c.survival));
    add("service_time", format_number(c.service_time));
    add("origin", format_number(c.origin));
    add("track_occupancy", c.track_occupancy ? "true" : "false");
  }
  if (cmd == "fig-independence" || cmd == "fig-correlated" || cmd == "simulate") {
    add("horizon", std::to_string(c.horizon));
    add("warmup", c.warmup ? std::to_string(*c.warmup) : "auto");
    add("reps", std::to_string(c.reps));
  }
  return kv;
}

Table rate_table(const ExperimentConfig& cfg) {
  return grid_table(cfg, "rate", [](const PsraProcess& p, double t) { return rate(p, t); });
}

Table intensity_table(const ExperimentConfig& cfg) {
  const double T = cfg.service_time;
  return grid_table(cfg, "mean_arrivals",
                    [T](const PsraProcess& p, double t) { return slot_moments(p, t, T).mean; });
}

Table queue_table(const ExperimentConfig& cfg) {
  const double T = cfg.service_time;
  Table out = grid_table(cfg, "mean_queue", [T](const PsraProcess& p, double t) {
    return independence_approx_mean(p, t, T);
  });
  out.columns.push_back("recursion_mean");
  bool truncated = false;
  std::size_t row = 0;
  for (double s : cfg.sigmas) {
    const PsraProcess proc{cfg.rate, DelayDistribution::gaussian(s), cfg.survival};
    for (double t : cfg.times) {
      const auto d = gidone_stationary(slot_count_dist(proc, t, T));
      truncated = truncated || d.truncated;
      out.rows[row++].push_back(d.mean);
    }
  }
  out.notes.emplace_back("queue_states",
                         std::string("recursion stops at P_n < 1e-12 or ") +
                             std::to_string(kDefaultQueueStates) +
                             " states, geometric tail; truncated=" + (truncated ? "yes" : "no"));
  return out;
}

Table fig_independence(const ExperimentConfig& cfg) {
  require_nonempty(cfg.rhos, "rho");
  require_nonempty(cfg.sigmas, "sigma");
  Table out;
  out.columns = {"rho", "sigma", "poisson_mdone", "analytic_valore", "simulated_mean", "sim_se"};
  std::size_t point = 0;
  for (double rho : cfg.rhos) {
    require_load(rho);
    const double T = rho / cfg.rate;
    for (double s : cfg.sigmas) {
      const PsraProcess proc{cfg.rate, DelayDistribution::gaussian(s)};
      SimConfig sc{proc};
      sc.service_time = T;
      sc.origin = cfg.origin;
      sc.horizon = cfg.horizon;
      sc.warmup = cfg.warmup;
      sc.seed = point_seed(cfg.seed, point++);
      const SimResult r = replicate(sc, cfg.reps);
      out.rows.push_back({rho, s, mdone_mean(rho), independence_approx_mean(proc, cfg.origin, T),
                          r.mean_queue, sim_se(r)});
    }
  }
  return out;
}

Table fig_correlated(const ExperimentConfig& cfg) {
  require_nonempty(cfg.rhos, "rho");
  const auto dist = occupancy_dist_dp(OccupancyModel::uniform(cfg.half_width));
  Table out;
  out.columns = {"rho", "simulated_mean", "sim_se", "correlated_approx", "uncorrelated_valore"};
  std::size_t point = 0;
  for (double rho : cfg.rhos) {
    require_load(rho);
    const PsraProcess proc{1.0, DelayDistribution::uniform(cfg.half_width), rho};
    SimConfig sc{proc};
    sc.horizon = cfg.horizon;
    sc.warmup = cfg.warmup;
    sc.seed = point_seed(cfg.seed, point++);
    const SimResult r = replicate(sc, cfg.reps);
    out.rows.push_back({rho, r.mean_queue, sim_se(r), correlated_mean_queue(dist, rho, cfg.alpha_floor),
                        independence_approx_mean(proc, 0.0, 1.0)});
  }
  return out;
}

Table fermi(const ExperimentConfig& cfg) {
  const auto model = OccupancyModel::uniform(cfg.half_width);
  const auto dist = occupancy_dist_dp(model);
  const int L = cfg.half_width;
  Table out;
  out.columns = {"quantity", "index", "value"};
  auto row = [&](const char* q, Cell idx, Cell v) { out.rows.push_back({q, std::move(idx), std::move(v)}); };

  for (std::size_t k = 0; k < dist.probs.size(); ++k) {
    row("occupancy_dp", static_cast<std::int64_t>(k), dist.probs[k]);
  }
  if (L <= kGinibreMaxHalfWidth) {
    const auto gin = occupancy_dist_ginibre(model);
    for (std::size_t k = 0; k < gin.probs.size(); ++k) {
      row("occupancy_ginibre", static_cast<std::int64_t>(k), gin.probs[k]);
    }
  } else {
    out.notes.emplace_back("occupancy_ginibre", "skipped, L above " + std::to_string(kGinibreMaxHalfWidth));
  }
  for (int a = -L + 1; a <= 0; ++a) row("return_time", std::int64_t{a}, mean_return_time(dist, a));
  const auto chain = alpha_chain(dist, cfg.rho, cfg.alpha_floor);
  for (std::size_t i = 0; i < chain.states(); ++i) {
    row("chain_stationary", std::int64_t{chain.alpha(i)}, chain.stationary[i]);
  }
  for (std::size_t i = 0; i < chain.states(); ++i) {
    row("conditional_mean", std::int64_t{chain.alpha(i)}, conditional_occupancy_mean(dist, chain.alpha(i)));
  }
  row("correlated_mean_queue", std::string(), correlated_mean_queue(dist, cfg.rho, cfg.alpha_floor));
  const PsraProcess proc{1.0, DelayDistribution::uniform(L), cfg.rho};
  row("independence_mean_queue", std::string(), independence_approx_mean(proc, 0.0, 1.0));

  const auto needed = min_alpha_for_horizon(dist, cfg.day, cfg.alpha_floor);
  if (needed) {
    row("min_alpha_for_day", std::string(), std::int64_t{*needed});
  } else {
    row("min_alpha_for_day", std::string(), std::string("requires_alpha_ge_1"));
  }
  const int a = needed.value_or(1);
  row("planning_mean_queue", std::int64_t{a}, a + conditional_occupancy_mean(dist, a));

  std::ostringstream exact;
  exact << uniform_empty_probability_exact(L);
  out.notes.emplace_back("empty_probability_exact", exact.str());
  out.notes.emplace_back("chain_balance_residual", format_number(chain.balance_residual()));
  int unreliable = 0;
  for (int a2 = -L + 1; a2 <= 0; ++a2) unreliable += return_time_reliable(dist, a2) ? 0 : 1;
  if (unreliable > 0) {
    out.notes.emplace_back("return_time_warning",
                           std::to_string(unreliable) +
                               " alpha values have P(|I| = -alpha) >= 1/(2L); T(alpha) is rough there");
  }
  return out;
}

Table simulate(const ExperimentConfig& cfg) {
  SimConfig sc{PsraProcess{cfg.rate, sim_delay(cfg), cfg.survival}};
  sc.service_time = cfg.service_time;
  sc.origin = cfg.origin;
  sc.horizon = cfg.horizon;
  sc.warmup = cfg.warmup;
  sc.seed = cfg.seed;
  sc.track_occupancy = cfg.track_occupancy;
  sc.keep_series = cfg.reps == 1;
  const SimResult r = replicate(sc, cfg.reps);

  Table out;
  const std::int64_t warmup = effective_warmup(sc);
  if (cfg.reps == 1) {
    out.columns = {"slot", "arrivals", "queue"};
    if (r.occupancy_tracked) out.columns.push_back("alpha");
    for (std::size_t k = 0; k < r.arrivals.size(); ++k) {
      std::vector<Cell> row{static_cast<std::int64_t>(k) + warmup, std::int64_t{r.arrivals[k]},
                            std::int64_t{r.queue[k]}};
      if (r.occupancy_tracked) row.emplace_back(std::int64_t{r.alpha[k + static_cast<std::size_t>(warmup)]});
      out.rows.push_back(std::move(row));
    }
  } else {
    out.columns = {"n", "probability"};
    for (std::size_t n = 0; n < r.queue_pmf.size(); ++n) {
      out.rows.push_back({static_cast<std::int64_t>(n), r.queue_pmf[n]});
    }
  }
  auto note = [&](const char* k, const std::string& v) { out.notes.emplace_back(k, v); };
  note("warmup_slots", std::to_string(warmup));
  note("index_margin", std::to_string(effective_index_margin(sc)));
  note("mean_queue", format_number(r.mean_queue));
  note("mean_queue_se", format_number(r.mean_queue_se));
  if (r.replications > 1) note("replication_se", format_number(r.replication_se));
  note("mean_arrivals", format_number(r.mean_arrivals()));
  note("lag1_autocovariance", format_number(r.lag1.value) + " +- " + format_number(r.lag1.se));
  note("total_arrivals", std::to_string(r.total_arrivals));
  note("total_services", std::to_string(r.total_services));
  note("final_queue", std::to_string(r.final_queue));
  note("conservation",
       r.total_arrivals == r.total_services + r.final_queue - r.initial_queue ? "ok" : "violated");
  if (r.occupancy_tracked) {
    for (const auto& [alpha, s] : busy_period_stats(r)) {
      note("busy_period", "alpha=" + std::to_string(alpha) + " count=" + std::to_string(s.count) +
                              " mean_length=" + format_number(s.mean_length));
    }
  }
  return out;
}

Table run(const ExperimentConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "rate-table") return rate_table(cfg);
  if (c == "intensity-table") return intensity_table(cfg);
  if (c == "queue-table") return queue_table(cfg);
  if (c == "fig-independence") return fig_independence(cfg);
  if (c == "fig-correlated") return fig_correlated(cfg);
  if (c == "fermi") return fermi(cfg);
  if (c == "simulate") return simulate(cfg);
  throw ConfigError("unknown command '" + c + "'");
}

}  // namespace psra::expcli
