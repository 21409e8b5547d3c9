#include "emt/csv.hpp"

#include "emt/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace emt {

namespace {

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

// Splits one logical record, which may span several physical lines when a
// quoted field contains a newline.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line))
    return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (quoted) {
        std::string next;
        if (!std::getline(in, next))
          throw Error(ErrorCode::InvalidValue, "unterminated quoted field", line_no);
        ++line_no;
        field.push_back('\n');
        line = std::move(next);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    const char c = line[i];
    any = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // CRLF
    } else {
      field.push_back(c);
    }
  }
  if (any || !fields.empty())
    fields.push_back(std::move(field));
  return true;
}

} // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  return std::nullopt;
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  while (read_record(in, fields, line_no)) {
    if (fields.empty() || (fields.size() == 1 && fields[0].empty()))
      continue;
    if (table.header.empty()) {
      if (fields[0].rfind("\xEF\xBB\xBF", 0) == 0)
        fields[0].erase(0, 3);
      table.header = fields;
      continue;
    }
    if (fields.size() != table.header.size())
      throw Error(ErrorCode::InvalidValue,
                  "expected " + std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()),
                  table.rows.size() + 1);
    table.rows.push_back(fields);
  }
  if (table.header.empty())
    throw Error(ErrorCode::EmptyInput, "CSV input has no header row");
  return table;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out << ',';
    if (needs_quotes(fields[i])) {
      out << '"';
      for (char c : fields[i]) {
        if (c == '"')
          out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << fields[i];
    }
  }
  out << '\n';
}

std::string format_number(double value) {
  if (value == 0.0)
    return "0";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{})
    return "nan";
  return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string s = buf;
  if (s.rfind("-0", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos)
    s.erase(0, 1);
  return s;
}

} // namespace emt
