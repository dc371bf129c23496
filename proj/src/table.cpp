#include "ntk/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "ntk/errors.hpp"

namespace ntk {

std::size_t ResultTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("ResultTable: no column '" + std::string(name) + "'");
}

double ResultTable::number(std::size_t row, std::string_view column) const {
  const Cell& c = rows.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return static_cast<double>(*u);
  throw std::invalid_argument("ResultTable: column '" + std::string(column) + "' is not numeric");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return quote(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          return std::to_string(v);
        }
      },
      c);
}

struct Field {
  std::string text;
  bool quoted;
};

Cell interpret(const Field& f) {
  if (f.quoted) return f.text;
  const std::string& s = f.text;
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (s.find_first_of(".eE") != std::string::npos) {
    double v;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && p == last) return v;
    return s;
  }
  if (!s.empty() && s[0] == '-') {
    std::int64_t v;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && p == last) return v;
    return s;
  }
  std::uint64_t u;
  auto [p, ec] = std::from_chars(first, last, u);
  if (ec == std::errc() && p == last) {
    if (u <= static_cast<std::uint64_t>(INT64_MAX)) return static_cast<std::int64_t>(u);
    return u;
  }
  return s;
}

}  // namespace

std::string to_csv(const ResultTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

ResultTable parse_csv(std::string_view text) {
  std::vector<std::vector<Field>> records;
  std::vector<Field> record;
  Field field{"", false};
  bool in_quotes = false, field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.text += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.text += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field.quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field = {"", false};
      field_started = false;
    } else if (c == '\n') {
      record.push_back(std::move(field));
      records.push_back(std::move(record));
      record.clear();
      field = {"", false};
      field_started = false;
    } else if (c != '\r') {
      field.text += c;
      field_started = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("parse_csv: unterminated quoted field");
  if (field_started || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  ResultTable t;
  if (records.empty()) return t;
  for (auto& f : records[0]) t.columns.push_back(f.text);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.columns.size()) {
      throw std::invalid_argument("parse_csv: row " + std::to_string(r) + " has " +
                                  std::to_string(records[r].size()) + " fields, header has " +
                                  std::to_string(t.columns.size()));
    }
    std::vector<Cell> row;
    for (const auto& f : records[r]) row.push_back(interpret(f));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot open '" + path + "'");
  f << content;
  f.close();
  if (!f) throw std::system_error(errno, std::generic_category(), "write failed for '" + path + "'");
}

}  // namespace

void emit_csv(const ResultTable& t, const std::string& path) { write_file(path, to_csv(t)); }

void emit_params(const ResultTable& t, const std::string& path) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : t.fixed) out += k + "," + quote(v) + "\n";
  write_file(path, out);
}

}  // namespace ntk
