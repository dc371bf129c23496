#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ntk {

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

// Experiment output: fixed schema per experiment, one row per grid cell and
// repetition. Fixed parameters travel alongside but are not part of the CSV.
struct ResultTable {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> fixed;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(std::string_view name) const;
  double number(std::size_t row, std::string_view column) const;

  bool operator==(const ResultTable& other) const {
    return columns == other.columns && rows == other.rows;
  }
};

// RFC 4180 with LF line endings. Doubles use the shortest round-trip form
// and always carry a '.' or exponent; strings are always quoted.
std::string to_csv(const ResultTable& t);
ResultTable parse_csv(std::string_view text);

void emit_csv(const ResultTable& t, const std::string& path);
// key,value lines for the fixed parameters.
void emit_params(const ResultTable& t, const std::string& path);

std::string format_double(double v);

}  // namespace ntk
