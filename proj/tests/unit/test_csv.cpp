#include "emt/csv.hpp"
#include "emt/error.hpp"

#include <doctest.h>

#include <sstream>

using namespace emt;

TEST_CASE("quoted fields, CRLF and BOM") {
  std::istringstream in("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\n3,4\r\n");
  const CsvTable t = read_csv(in);
  REQUIRE(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "x,1");
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.column("b") == 1u);
  CHECK_FALSE(t.column("c").has_value());
}

TEST_CASE("field count mismatch and empty input") {
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);
  std::istringstream empty("");
  try {
    read_csv(empty);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
  }
}

TEST_CASE("written rows read back") {
  std::ostringstream out;
  write_csv_row(out, {"a", "b,c", "d\"e"});
  write_csv_row(out, {"1", "2", "3"});
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  CHECK(t.header == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(t.rows[0] == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(7602) == "7602");
  const double x = 1.0 / 3.0;
  CHECK(std::stod(format_number(x)) == x);
  CHECK(format_fixed(152.857, 1) == "152.9");
  CHECK(format_fixed(-0.0001, 2) == "0.00");
}
