#include <cmath>
#include <cstdio>
#include <ostream>

#include "psra/errors.hpp"
#include "psra/expcli.hpp"

namespace psra::expcli {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return k;
  }
  throw ConfigError("no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw ConfigError("column '" + std::string(name) + "' is not numeric");
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const Table& table) {
  out << "# command: " << cfg.command << '\n';
  out << "# config:";
  for (const auto& [k, v] : describe(cfg)) out << ' ' << k << '=' << v << ';';
  out << '\n';
  out << "# seed: " << cfg.seed << '\n';
  out << "# version: " << kVersion << '\n';
  for (const auto& [k, v] : table.notes) out << "# " << k << ": " << v << '\n';
  for (std::size_t k = 0; k < table.columns.size(); ++k) {
    out << (k ? "," : "") << table.columns[k];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_cell(row[k]);
    out << '\n';
  }
  if (!out) throw ConfigError("failed writing CSV output");
}

}  // namespace psra::expcli
