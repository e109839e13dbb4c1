#pragma once

// Row-oriented result tables with a lossless CSV form and a JSON form.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ellwave::cli {

// Empty, integer, real or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;

  std::size_t column(std::string_view name) const;  // throws std::out_of_range
  bool operator==(const Table&) const = default;
};

// Reals are written with 17 significant digits and always carry a '.', 'e',
// "nan" or "inf" so they read back as reals. Text that would otherwise read
// back as a number or as empty is quoted.
std::string format_real(double v);
std::string to_csv(const Table& table);
// Throws std::invalid_argument on malformed input (unterminated quote,
// ragged row).
Table parse_csv(std::string_view text);

// Array of flat objects; empty cells become null.
std::string to_json(const Table& table);

}  // namespace ellwave::cli
