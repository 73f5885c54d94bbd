#include "cli/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "cli/version.hpp"

namespace cyclewalk::cli {

namespace {

std::string chars(double v, bool shortest) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = shortest ? std::to_chars(buf, buf + sizeof buf, v)
                            : std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

std::string render(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "1" : "0";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

// Strings are quoted only when they would break the row.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const Cell& c) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

}  // namespace

std::string format_double(double v) { return chars(v, false); }

std::string format_shortest(double v) { return chars(v, true); }

void write_csv(const Table& table, std::ostream& os) {
  os << "# schema: " << kCsvSchema << '\n';
  os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
  os << "# config:";
  for (const auto& [k, v] : table.config) os << ' ' << k << '=' << v;
  os << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << table.columns[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      const Cell& c = row[i];
      os << (std::holds_alternative<std::string>(c) ? csv_field(std::get<std::string>(c)) : render(c));
    }
    os << '\n';
  }
  for (const auto& [k, v] : table.summary) os << "# " << k << ": " << render(v) << '\n';
}

void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["schema"] = kJsonSchema;
  doc["tool"] = std::string(kToolName) + " " + kToolVersion;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.config) cfg[k] = v;
  doc["config"] = cfg;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) r.push_back(to_json(c));
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : table.summary) summary[k] = to_json(v);
  doc["summary"] = summary;
  os << doc.dump(2) << '\n';
}

void write_table(const Table& table, Format format, std::ostream& os) {
  if (format == Format::Csv) {
    write_csv(table, os);
  } else {
    write_json(table, os);
  }
}

}  // namespace cyclewalk::cli
