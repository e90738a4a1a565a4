#include <cmath>
#include <map>
#include <sstream>

#include "psra/errors.hpp"
#include "psra/expcli.hpp"
#include "psra/fermi.hpp"

namespace psra::expcli {
namespace detail {
extern const std::string_view kRateTableCsv;
extern const std::string_view kIntensityTableCsv;
extern const std::string_view kQueueTableCsv;
}  // namespace detail

namespace {

std::vector<ReferenceCell> parse(std::string_view csv) {
  std::vector<ReferenceCell> cells;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    ReferenceCell c{};
    char comma1 = 0, comma2 = 0;
    std::istringstream row(line);
    row >> c.sigma >> comma1 >> c.t >> comma2 >> c.value;
    if (!row || comma1 != ',' || comma2 != ',') throw std::logic_error("bad reference row: " + line);
    cells.push_back(c);
  }
  return cells;
}

bool same(double a, double b) { return std::abs(a - b) < 1e-9; }

}  // namespace

const std::vector<ReferenceCell>& reference(std::string_view command) {
  static const std::map<std::string, std::vector<ReferenceCell>, std::less<>> tables{
      {"rate-table", parse(detail::kRateTableCsv)},
      {"intensity-table", parse(detail::kIntensityTableCsv)},
      {"queue-table", parse(detail::kQueueTableCsv)},
  };
  const auto it = tables.find(command);
  if (it == tables.end()) throw ConfigError("no reference values for '" + std::string(command) + "'");
  return it->second;
}

double reference_tolerance(std::string_view command) {
  return command == "queue-table" ? 1e-4 : 1e-6;
}

bool checkable(std::string_view command) {
  return command == "rate-table" || command == "intensity-table" || command == "queue-table" ||
         command == "fermi";
}

CheckReport check(const ExperimentConfig& cfg, const Table& table) {
  CheckReport rep;
  auto compare = [&](const std::string& label, double got, double want, double tol) {
    ++rep.compared;
    const double err = std::abs(got - want);
    rep.max_error = std::max(rep.max_error, err);
    if (!(err <= tol)) {
      rep.mismatches.push_back(label + ": got " + format_number(got) + ", expected " +
                               format_number(want));
    }
  };

  if (cfg.command == "fermi") {
    std::map<std::int64_t, double> dp;
    std::map<std::int64_t, double> gin;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& q = std::get<std::string>(table.rows[r][0]);
      if (q == "occupancy_dp") dp[std::get<std::int64_t>(table.rows[r][1])] = table.number(r, "value");
      if (q == "occupancy_ginibre") gin[std::get<std::int64_t>(table.rows[r][1])] = table.number(r, "value");
    }
    double total = 0.0;
    for (const auto& [k, p] : dp) {
      total += p;
      if (gin.count(k)) compare("P(|I|=" + std::to_string(k) + ") ginibre", gin[k], p, 1e-9);
    }
    compare("sum of P(|I|=k)", total, 1.0, 1e-10);
    const double exact = static_cast<double>(uniform_empty_probability_exact(cfg.half_width));
    compare("P(|I|=0) exact", dp.at(0), exact, 1e-13 * exact);
    return rep;
  }

  const auto& ref = reference(cfg.command);
  const double tol = reference_tolerance(cfg.command);
  const std::string value_column = table.columns.at(2);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double s = table.number(r, "sigma");
    const double t = table.number(r, "t");
    for (const auto& c : ref) {
      if (same(c.sigma, s) && same(c.t, t)) {
        compare(value_column + "(sigma=" + format_number(s) + ", t=" + format_number(t) + ")",
                table.number(r, value_column), c.value, tol);
      }
    }
  }
  return rep;
}

}  // namespace psra::expcli
