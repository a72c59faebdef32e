#pragma once

// Tabular output. CSV carries a '#'-prefixed header with the schema version,
// the command, and the effective configuration as "#cfg key=value" lines, so
// the file itself can be fed back through --config.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qffcr/core_types.hpp"
#include "qffcr/optimizer.hpp"

namespace qffcr::report {

inline constexpr int kSchemaVersion = 1;

// Shortest-safe, locale-independent: 17 significant digits.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Header {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> notes;
};

enum class Format { csv, json };
std::optional<Format> parse_format(std::string_view s);

void write_csv(std::ostream& os, const Header& h, const Table& t);
// First line is a header object; then one object per row.
void write_json_lines(std::ostream& os, const Header& h, const Table& t);
void write(std::ostream& os, Format f, const Header& h, const Table& t);

Table metrics_table(const std::vector<MetricsRow>& rows);
Table opt_table(const std::vector<OptResult>& results);
Table sweep_table(const std::vector<SweepRow>& rows);
Table pareto_table(const ParetoScan& scan);

}  // namespace qffcr::report
