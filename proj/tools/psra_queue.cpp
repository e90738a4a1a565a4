// psra-queue: tables, figure data and simulations for queues fed by
// pre-scheduled random arrivals.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "psra/errors.hpp"
#include "psra/expcli.hpp"

namespace ex = psra::expcli;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kDomain = 3, kMismatch = 4 };

const std::map<std::string, std::string> kHelp{
    {"rate-table", "instantaneous arrival rate over a (sigma, t) grid"},
    {"intensity-table", "expected arrivals per service window over a (sigma, t) grid"},
    {"queue-table", "independence-approximation mean queue over a (sigma, t) grid"},
    {"fig-independence", "M/D/1, independence approximation and simulation vs sigma"},
    {"fig-correlated", "correlated approximation vs simulation at high load"},
    {"fermi", "occupancy law, return times and the alpha chain for uniform delays"},
    {"simulate", "one simulation run (per-slot series) or pooled replications (queue law)"},
};

void bind(CLI::App* sub, ex::ExperimentConfig& c) {
  const std::string& cmd = c.command;
  const bool grid = cmd == "rate-table" || cmd == "intensity-table" || cmd == "queue-table";
  const bool sim = cmd == "fig-independence" || cmd == "fig-correlated" || cmd == "simulate";

  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  if (grid || cmd == "fig-independence") {
    sub->add_option("--sigma", c.sigmas, "delay standard deviations")->delimiter(',');
  }
  if (grid) {
    sub->add_option("--t", c.times, "window start times")->delimiter(',');
    sub->add_option("--survival", c.survival, "probability a customer is kept")->capture_default_str();
  }
  if (grid || cmd == "fig-independence" || cmd == "simulate") {
    sub->add_option("--rate", c.rate, "scheduled arrivals per unit time")->capture_default_str();
  }
  if (cmd == "intensity-table" || cmd == "queue-table" || cmd == "simulate") {
    sub->add_option("--service-time", c.service_time, "service slot length T")->capture_default_str();
  }
  if (cmd == "fig-independence" || cmd == "fig-correlated") {
    sub->add_option("--rho", c.rhos, "traffic intensities")->delimiter(',');
  }
  if (cmd == "fig-independence" || cmd == "simulate") {
    sub->add_option("--origin", c.origin, "time of the first slot boundary")->capture_default_str();
  }
  if (cmd == "fig-correlated" || cmd == "fermi" || cmd == "simulate") {
    sub->add_option("--L", c.half_width, "uniform delay half-width")->capture_default_str();
  }
  if (cmd == "fig-correlated" || cmd == "fermi") {
    sub->add_option_function<int>("--alpha-floor", [&c](const int& v) { c.alpha_floor = v; },
                                  "lowest alpha state of the chain (default -L+1)");
  }
  if (cmd == "fermi") {
    sub->add_option("--rho", c.rho, "traffic intensity")->capture_default_str();
    sub->add_option("--day", c.day, "operations per day for the minimum alpha")->capture_default_str();
  }
  if (sim) {
    sub->add_option("--horizon", c.horizon, "slots per replication")->capture_default_str();
    sub->add_option_function<std::int64_t>("--warmup", [&c](const std::int64_t& v) { c.warmup = v; },
                                           "slots discarded (default 20 delay scales)");
    sub->add_option("--reps", c.reps, "independent replications")->capture_default_str();
  }
  if (cmd == "simulate") {
    sub->add_option("--family", c.family, "gaussian or uniform")->capture_default_str();
    sub->add_option("--sigma", c.sigma, "gaussian delay standard deviation")->capture_default_str();
    sub->add_flag("--track-occupancy", c.track_occupancy, "follow |I_j| and alpha (uniform, T = rate = 1)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Queues fed by pre-scheduled random arrivals", "psra-queue"};
  app.set_version_flag("--version", std::string(ex::kVersion));
  CLI::Option* config_opt =
      app.set_config("--config", "", "INI file with one [section] per command; flags override it");
  config_opt->configurable(false);
  std::string out_path;
  bool check = false;
  app.add_option("--out", out_path, "write the CSV here instead of stdout");
  app.add_flag("--check", check, "compare against reference values, exit 4 on mismatch");
  app.require_subcommand(1);

  std::map<std::string, ex::ExperimentConfig> configs;
  for (const auto& name : ex::command_names()) {
    auto& cfg = configs[name] = ex::defaults(name);
    CLI::App* sub = app.add_subcommand(name, kHelp.at(name));
    sub->fallthrough();
    bind(sub, cfg);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const ex::ExperimentConfig& cfg = configs.at(name);
  try {
    if (check && !ex::checkable(name)) {
      throw psra::ConfigError("--check is not available for " + name);
    }
    ex::Table table = ex::run(cfg);
    if (config_opt->count() > 0) {
      table.notes.insert(table.notes.begin(), {"config_file", config_opt->as<std::string>()});
    }

    ex::CheckReport report;
    if (check) {
      report = ex::check(cfg, table);
      table.notes.emplace_back("check", std::string(report.ok() ? "pass" : "FAIL") + ", " +
                                            std::to_string(report.compared) + " values, max error " +
                                            ex::format_number(report.max_error));
    }
    if (out_path.empty()) {
      ex::write_csv(std::cout, cfg, table);
    } else {
      std::ofstream out(out_path);
      if (!out) throw psra::ConfigError("cannot open " + out_path + " for writing");
      ex::write_csv(out, cfg, table);
    }
    if (check) {
      for (const auto& m : report.mismatches) std::cerr << "mismatch: " << m << '\n';
      if (report.compared == 0) std::cerr << "check: no value of this grid has a reference\n";
      std::cerr << "check: " << (report.ok() ? "pass" : "FAIL") << " (" << report.compared
                << " values, max error " << ex::format_number(report.max_error) << ")\n";
      if (!report.ok()) return kMismatch;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "psra-queue: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "psra-queue: numeric domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "psra-queue: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
