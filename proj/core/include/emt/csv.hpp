#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emt {

/// Minimal RFC 4180 table: a header row followed by data rows. Quoted
/// fields, CRLF line endings and a leading UTF-8 byte-order mark are
/// accepted. Blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal representation that round-trips to the same double.
std::string format_number(double value);
/// Fixed-point representation with `digits` decimals.
std::string format_fixed(double value, int digits);

} // namespace emt
