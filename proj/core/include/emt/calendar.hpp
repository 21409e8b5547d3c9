#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace emt {

using Date = std::chrono::sys_days;

/// Parses a strict `YYYY-MM-DD` date. Throws Error(InvalidValue) otherwise.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

struct IsoWeek {
  int year;
  int week;

  friend bool operator==(const IsoWeek&, const IsoWeek&) = default;
  friend auto operator<=>(const IsoWeek&, const IsoWeek&) = default;
};

/// ISO-8601 week: weeks start on Monday and week 1 contains the year's
/// first Thursday.
IsoWeek iso_week(Date date);
int iso_weeks_in_year(int year);
Date iso_week_monday(int year, int week);
bool is_monday(Date date);

/// ISO weeks of `year` that contain a public holiday known to depress
/// weekly registrations for `country`. The table only covers England and
/// Wales ("ew"): Easter Monday, the Spring and Summer bank holidays and
/// Christmas Day. Other countries return an empty list.
std::vector<int> holiday_weeks(std::string_view country, int year);

} // namespace emt
