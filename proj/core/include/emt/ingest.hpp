#pragma once

#include "emt/calendar.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emt {

enum class AgeGroup { all, over65, under65 };
enum class Cadence { daily, weekly };

/// "0+", "65+" or "64-".
std::string_view to_string(AgeGroup age);
AgeGroup parse_age_group(std::string_view text);
std::string_view to_string(Cadence cadence);

/// Raw death counts at a uniform daily or weekly step.
struct MortalitySeries {
  std::string country;
  AgeGroup age_group = AgeGroup::all;
  Cadence cadence = Cadence::daily;
  Date start_date{};
  std::vector<std::int64_t> counts;
  std::int64_t population = 0;
  // Daily entries dropped at either end by aggregate_daily_to_weekly.
  std::size_t trimmed_head = 0;
  std::size_t trimmed_tail = 0;

  std::size_t size() const noexcept { return counts.size(); }
  int step_days() const noexcept { return cadence == Cadence::daily ? 1 : 7; }
  Date date_at(std::size_t i) const;
  std::vector<double> values() const;
};

/// Throws Error on a broken invariant (empty, negative count, bad population).
void validate(const MortalitySeries& series);

/// Deaths per million of population per period.
struct RateSeries {
  std::string country;
  AgeGroup age_group = AgeGroup::all;
  Cadence cadence = Cadence::daily;
  Date start_date{};
  std::vector<double> values;
};

/// Per-year rows of weekly values indexed by ISO week (row[w - 1]).
struct WeeklyPanel {
  std::vector<int> years;
  std::vector<std::vector<double>> rows;

  bool has_year(int year) const;
  const std::vector<double>& row(int year) const;
};

/// Names of the CSV columns holding each field.
struct ColumnMap {
  std::string date = "date";
  std::string deaths = "deaths";
  std::string population = "population";
  std::string country = "country";
  std::string age_group = "age_group";
};

/// Values used when the optional columns are absent.
struct SeriesDefaults {
  std::string country;
  AgeGroup age_group = AgeGroup::all;
  std::optional<std::int64_t> population;
  std::optional<Cadence> cadence; // inferred from the date step when unset
};

/// Approximate national population for the countries this tool ships
/// defaults for ("ew", "de", "be"); nullopt otherwise.
std::optional<std::int64_t> reference_population(std::string_view country, AgeGroup age);

MortalitySeries parse_mortality_csv(std::istream& source, const ColumnMap& mapping = {},
                                    const SeriesDefaults& defaults = {});
MortalitySeries read_mortality_csv(const std::filesystem::path& path,
                                   const ColumnMap& mapping = {},
                                   const SeriesDefaults& defaults = {});
/// Writes `date,deaths,population,country,age_group`.
void write_mortality_csv(std::ostream& out, const MortalitySeries& series);

RateSeries to_rate_per_million(const MortalitySeries& series);

/// Sums complete ISO weeks (Monday..Sunday). Leading days before the first
/// Monday and a trailing partial week are dropped and recorded in
/// trimmed_head / trimmed_tail.
MortalitySeries aggregate_daily_to_weekly(const MortalitySeries& series);

/// Requires a weekly series covering whole ISO years.
WeeklyPanel to_weekly_panel(const MortalitySeries& series);
WeeklyPanel to_weekly_panel(const RateSeries& series);

/// Entries whose year lies in [first_year, last_year]: ISO year for weekly
/// data, calendar year for daily data.
MortalitySeries select_years(const MortalitySeries& series, int first_year, int last_year);

/// Per-entry flag: true where the entry's ISO week contains a public holiday
/// from holiday_weeks(). Flags only; counts are never adjusted.
std::vector<bool> flag_holiday_weeks(const MortalitySeries& series);

} // namespace emt
