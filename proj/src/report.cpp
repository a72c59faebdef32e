#include "qffcr/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qffcr::report {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("float formatting failed");
  return {buf, res.ptr};
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from column count");
  rows.push_back(std::move(row));
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  return std::nullopt;
}

namespace {

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "1" : "0";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        }
      },
      c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_double(v);
          return v;
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

void write_csv(std::ostream& os, const Header& h, const Table& t) {
  os << "# qffcr schema_version=" << kSchemaVersion << '\n';
  os << "# command=" << h.command << '\n';
  for (const auto& [k, v] : h.config) os << "#cfg " << k << '=' << v << '\n';
  for (const auto& note : h.notes) os << "# " << note << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

void write_json_lines(std::ostream& os, const Header& h, const Table& t) {
  nlohmann::ordered_json head;
  head["schema_version"] = kSchemaVersion;
  head["command"] = h.command;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : h.config) cfg[k] = v;
  head["config"] = cfg;
  head["notes"] = h.notes;
  os << head.dump() << '\n';
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
    os << obj.dump() << '\n';
  }
}

void write(std::ostream& os, Format f, const Header& h, const Table& t) {
  if (f == Format::csv) {
    write_csv(os, h, t);
  } else {
    write_json_lines(os, h, t);
  }
}

Table metrics_table(const std::vector<MetricsRow>& rows) {
  Table t{{"engine", "convention", "r", "theta", "eta", "probability", "fidelity", "qfi", "imag_residual"},
          {}};
  for (const auto& m : rows) {
    t.add({std::string(to_string(m.engine)), std::string(to_string(m.convention)), m.r, m.theta, m.eta,
           m.probability, m.fidelity, m.qfi, m.imag_residual});
  }
  return t;
}

Table opt_table(const std::vector<OptResult>& results) {
  Table t{{"engine", "convention", "objective", "r", "theta_star", "eta_star", "value", "probability",
           "fidelity", "qfi", "imag_residual", "on_boundary", "evaluations", "infeasible"},
          {}};
  for (const auto& o : results) {
    const MetricsRow& c = o.companion;
    t.add({std::string(to_string(o.engine)), std::string(to_string(o.convention)),
           std::string(to_string(o.objective)), o.r, o.theta_star, o.eta_star, o.value, c.probability,
           c.fidelity, c.qfi, c.imag_residual, o.on_boundary, o.evaluations, o.infeasible});
  }
  return t;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t{{"engine", "convention", "objective", "r", "theta_star", "eta_star", "value", "probability",
           "fidelity", "qfi", "imag_residual", "on_boundary", "dn_fidelity", "dn_qfi"},
          {}};
  for (const auto& s : rows) {
    const OptResult& o = s.opt;
    const MetricsRow& c = o.companion;
    t.add({std::string(to_string(o.engine)), std::string(to_string(o.convention)),
           std::string(to_string(o.objective)), o.r, o.theta_star, o.eta_star, o.value, c.probability,
           c.fidelity, c.qfi, c.imag_residual, o.on_boundary, s.dn.fidelity, s.dn.qfi});
  }
  return t;
}

Table pareto_table(const ParetoScan& scan) {
  Table t{{"r", "theta", "eta", "fidelity", "probability", "physical", "dn_fidelity"}, {}};
  for (const auto& p : scan.points) {
    t.add({scan.r, p.theta, p.eta, p.fidelity, p.probability, p.physical, scan.dn_fidelity});
  }
  return t;
}

}  // namespace qffcr::report
