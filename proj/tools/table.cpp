#include "table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace ellwave::cli {

namespace {

bool is_integer_text(std::string_view s) {
  std::int64_t v;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& out) {
  if (s == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  if (s == "inf" || s == "-inf") {
    out = s[0] == '-' ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
    return true;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  double ignored;
  if (is_integer_text(s) || parse_real(s, ignored)) return true;
  return s.find_first_of(",\"\r\n") != std::string::npos || s.front() == ' ' || s.back() == ' ';
}

void append_cell(std::string& out, const Cell& cell) {
  switch (cell.index()) {
    case 0:
      break;
    case 1:
      out += std::to_string(std::get<std::int64_t>(cell));
      break;
    case 2:
      out += format_real(std::get<double>(cell));
      break;
    case 3: {
      const auto& s = std::get<std::string>(cell);
      if (!needs_quotes(s)) {
        out += s;
        break;
      }
      out += '"';
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
      break;
    }
  }
}

Cell read_unquoted(std::string_view field) {
  if (field.empty()) return std::monostate{};
  std::int64_t i;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), i);
  if (ec == std::errc() && ptr == field.data() + field.size()) return i;
  double d;
  if (parse_real(field, d)) return d;
  return std::string(field);
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    append_cell(out, Cell(table.columns[i]));
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_cell(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(std::string_view text) {
  std::vector<Row> records;
  Row record;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  bool pending = false;  // something has been read on the current record
  auto end_field = [&] {
    record.push_back(quoted ? Cell(field) : read_unquoted(field));
    field.clear();
    quoted = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch != '"') {
        field += ch;
      } else if (i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else {
        in_quotes = false;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field.empty() || quoted) throw std::invalid_argument("stray quote in CSV field");
        in_quotes = quoted = pending = true;
        break;
      case ',':
        end_field();
        pending = true;
        break;
      case '\r':
        break;
      case '\n':
        if (pending) {
          end_field();
          records.push_back(std::move(record));
          record.clear();
        }
        pending = false;
        break;
      default:
        field += ch;
        pending = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("unterminated quote in CSV");
  if (pending) {
    end_field();
    records.push_back(std::move(record));
  }

  Table table;
  if (records.empty()) return table;
  for (const auto& c : records.front()) {
    if (c.index() != 3) throw std::invalid_argument("CSV header must be text");
    table.columns.push_back(std::get<std::string>(c));
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.columns.size()) {
      throw std::invalid_argument("CSV row " + std::to_string(r) + " has " +
                                  std::to_string(records[r].size()) + " fields, expected " +
                                  std::to_string(table.columns.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string to_json(const Table& table) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      auto& slot = obj[table.columns[i]];
      switch (row[i].index()) {
        case 0: slot = nullptr; break;
        case 1: slot = std::get<std::int64_t>(row[i]); break;
        case 2: {
          const double v = std::get<double>(row[i]);
          if (std::isfinite(v)) {
            slot = v;
          } else {
            slot = format_real(v);
          }
          break;
        }
        case 3: slot = std::get<std::string>(row[i]); break;
      }
    }
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

}  // namespace ellwave::cli
