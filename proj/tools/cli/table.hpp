#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cyclewalk::cli {

inline constexpr const char* kCsvSchema = "cyclewalk-csv/1";
inline constexpr const char* kJsonSchema = "cyclewalk-json/1";

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// 17 significant digits, locale independent, shortest exponent form.
std::string format_double(double v);

/// Shortest round-trip form; used for echoing configuration values.
std::string format_shortest(double v);

enum class Format { Csv, Json };

/// A result table plus the metadata that travels with it.
struct Table {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, std::ostream& os);
void write_table(const Table& table, Format format, std::ostream& os);

}  // namespace cyclewalk::cli
