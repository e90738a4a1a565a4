#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace psra::expcli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Every knob of every command. Unused fields are ignored by a command;
/// defaults() fills in the per-command defaults.
struct ExperimentConfig {
  std::string command;
  std::vector<double> sigmas;
  std::vector<double> times;
  std::vector<double> rhos;
  double service_time = 0.9;
  double rate = 1.0;
  double survival = 1.0;
  int half_width = 5;
  double rho = 0.95;
  std::int64_t day = 1000;
  std::optional<int> alpha_floor;

  // simulation
  std::string family = "gaussian";
  double sigma = 1.0;
  double origin = 0.0;
  std::int64_t horizon = 200000;
  std::optional<std::int64_t> warmup;
  int reps = 4;
  std::uint64_t seed = 1;
  bool track_occupancy = false;
};

/// Defaults for a command name; throws ConfigError on an unknown command.
ExperimentConfig defaults(std::string_view command);
const std::vector<std::string>& command_names();

/// key=value pairs describing the config as a command sees it.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& cfg);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra `# key: value` header lines (summaries, diagnostics).
  std::vector<std::pair<std::string, std::string>> notes;

  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] double number(std::size_t row, std::string_view name) const;
};

Table rate_table(const ExperimentConfig& cfg);
Table intensity_table(const ExperimentConfig& cfg);
Table queue_table(const ExperimentConfig& cfg);
Table fig_independence(const ExperimentConfig& cfg);
Table fig_correlated(const ExperimentConfig& cfg);
Table fermi(const ExperimentConfig& cfg);
Table simulate(const ExperimentConfig& cfg);

/// Dispatches on cfg.command.
Table run(const ExperimentConfig& cfg);

struct CheckReport {
  std::size_t compared = 0;
  std::vector<std::string> mismatches;
  double max_error = 0.0;
  [[nodiscard]] bool ok() const noexcept { return compared > 0 && mismatches.empty(); }
};

/// Whether --check means anything for this command.
bool checkable(std::string_view command);

/// Table commands: cells against the embedded published values. fermi: the
/// two occupancy evaluators against each other and the exact empty probability.
CheckReport check(const ExperimentConfig& cfg, const Table& table);

/// Published reference grid for a table command: rows of (sigma, t, value).
struct ReferenceCell {
  double sigma;
  double t;
  double value;
};
const std::vector<ReferenceCell>& reference(std::string_view command);
double reference_tolerance(std::string_view command);

std::string format_number(double x);
std::string format_cell(const Cell& c);

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const Table& table);

}  // namespace psra::expcli
