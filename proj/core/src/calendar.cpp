#include "emt/calendar.hpp"

#include "emt/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace emt {

using namespace std::chrono;

namespace {

int parse_digits(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidValue,
                "invalid ISO-8601 date '" + std::string(whole) + "'");
  return value;
}

Date last_monday(int y, unsigned m) {
  return sys_days{year{y} / month{m} / Monday[last]};
}

// Anonymous Gregorian algorithm.
Date easter_sunday(int y) {
  const int a = y % 19, b = y / 100, c = y % 100, d = b / 4, e = b % 4;
  const int f = (b + 8) / 25, g = (b - f + 1) / 3;
  const int h = (19 * a + b - d - g + 15) % 30;
  const int i = c / 4, k = c % 4;
  const int l = (32 + 2 * e + 2 * i - h - k) % 7;
  const int m = (a + 11 * h + 22 * l) / 451;
  const int month_ = (h + l - 7 * m + 114) / 31;
  const int day_ = ((h + l - 7 * m + 114) % 31) + 1;
  return sys_days{year{y} / month{static_cast<unsigned>(month_)} /
                  day{static_cast<unsigned>(day_)}};
}

} // namespace

Date parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw Error(ErrorCode::InvalidValue,
                "invalid ISO-8601 date '" + std::string(text) + "'");
  const int y = parse_digits(text.substr(0, 4), text);
  const int m = parse_digits(text.substr(5, 2), text);
  const int d = parse_digits(text.substr(8, 2), text);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok())
    throw Error(ErrorCode::InvalidValue,
                "invalid calendar date '" + std::string(text) + "'");
  return sys_days{ymd};
}

std::string format_iso_date(Date date) {
  const year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool is_monday(Date date) { return weekday{date} == Monday; }

Date iso_week_monday(int y, int week) {
  // 4 January is always in ISO week 1.
  const sys_days jan4{year{y} / January / 4};
  const sys_days week1 = jan4 - days{weekday{jan4}.iso_encoding() - 1};
  return week1 + weeks{week - 1};
}

int iso_weeks_in_year(int y) {
  // A year has 53 weeks when 28 December falls in week 53.
  const sys_days dec28{year{y} / December / 28};
  return static_cast<int>((dec28 - iso_week_monday(y, 1)).count() / 7) + 1;
}

IsoWeek iso_week(Date date) {
  const sys_days thursday = date + days{4 - static_cast<int>(weekday{date}.iso_encoding())};
  const int y = static_cast<int>(year_month_day{thursday}.year());
  const int week = static_cast<int>((thursday - iso_week_monday(y, 1)).count() / 7) + 1;
  return {y, week};
}

std::vector<int> holiday_weeks(std::string_view country, int y) {
  std::vector<int> out;
  if (country != "ew")
    return out;
  const Date dates[] = {easter_sunday(y) + days{1}, last_monday(y, 5),
                        last_monday(y, 8), sys_days{year{y} / December / 25}};
  for (Date d : dates) {
    const IsoWeek w = iso_week(d);
    if (w.year == y)
      out.push_back(w.week);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace emt
