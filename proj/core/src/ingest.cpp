#include "emt/ingest.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

namespace emt {

using namespace std::chrono;

namespace {

std::int64_t parse_count(const std::string& text, std::size_t row, std::string_view what) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last)
    throw Error(ErrorCode::InvalidValue,
                std::string(what) + " must be a plain integer, got '" + text + "'", row);
  return value;
}

int year_of(const MortalitySeries& s, std::size_t i) {
  const Date d = s.date_at(i);
  return s.cadence == Cadence::weekly ? iso_week(d).year
                                      : static_cast<int>(year_month_day{d}.year());
}

template <typename Values>
WeeklyPanel make_panel(Cadence cadence, Date start, const Values& values) {
  if (cadence != Cadence::weekly)
    throw Error(ErrorCode::NotWeekly, "weekly panel requires weekly cadence");
  if (values.empty())
    throw Error(ErrorCode::EmptyInput, "empty series");
  WeeklyPanel panel;
  const IsoWeek first = iso_week(start);
  if (first.week != 1)
    throw Error(ErrorCode::PartialYear,
                "series starts in ISO week " + std::to_string(first.week) + " of " +
                    std::to_string(first.year));
  std::size_t i = 0;
  int y = first.year;
  while (i < values.size()) {
    const int weeks_in = iso_weeks_in_year(y);
    if (i + static_cast<std::size_t>(weeks_in) > values.size())
      throw Error(ErrorCode::PartialYear,
                  "ISO year " + std::to_string(y) + " has " +
                      std::to_string(values.size() - i) + " of " + std::to_string(weeks_in) +
                      " weeks");
    panel.years.push_back(y);
    panel.rows.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i),
                            values.begin() + static_cast<std::ptrdiff_t>(i + weeks_in));
    i += static_cast<std::size_t>(weeks_in);
    ++y;
  }
  return panel;
}

} // namespace

std::string_view to_string(AgeGroup age) {
  switch (age) {
  case AgeGroup::all: return "0+";
  case AgeGroup::over65: return "65+";
  case AgeGroup::under65: return "64-";
  }
  return "0+";
}

AgeGroup parse_age_group(std::string_view text) {
  if (text == "0+" || text == "all")
    return AgeGroup::all;
  if (text == "65+")
    return AgeGroup::over65;
  if (text == "64-" || text == "0-64")
    return AgeGroup::under65;
  throw Error(ErrorCode::InvalidValue, "unknown age group '" + std::string(text) + "'");
}

std::string_view to_string(Cadence cadence) {
  return cadence == Cadence::daily ? "daily" : "weekly";
}

Date MortalitySeries::date_at(std::size_t i) const {
  return start_date + days{static_cast<int>(i) * step_days()};
}

std::vector<double> MortalitySeries::values() const {
  return {counts.begin(), counts.end()};
}

void validate(const MortalitySeries& s) {
  if (s.counts.empty())
    throw Error(ErrorCode::EmptyInput, "series has no entries");
  if (s.population <= 0)
    throw Error(ErrorCode::InvalidValue, "population must be positive");
  for (std::size_t i = 0; i < s.counts.size(); ++i)
    if (s.counts[i] < 0)
      throw Error(ErrorCode::NegativeCount, "negative death count", i + 1);
}

bool WeeklyPanel::has_year(int year) const {
  return std::find(years.begin(), years.end(), year) != years.end();
}

const std::vector<double>& WeeklyPanel::row(int year) const {
  const auto it = std::find(years.begin(), years.end(), year);
  if (it == years.end())
    throw Error(ErrorCode::UnknownYear, "year " + std::to_string(year) + " not in panel");
  return rows[static_cast<std::size_t>(it - years.begin())];
}

std::optional<std::int64_t> reference_population(std::string_view country, AgeGroup age) {
  struct Entry {
    std::string_view country;
    std::int64_t all, over65;
  };
  static constexpr Entry table[] = {
      {"ew", 59'000'000, 11'000'000},
      {"de", 83'000'000, 17'500'000},
      {"be", 11'500'000, 2'200'000},
  };
  for (const Entry& e : table) {
    if (e.country != country)
      continue;
    switch (age) {
    case AgeGroup::all: return e.all;
    case AgeGroup::over65: return e.over65;
    case AgeGroup::under65: return e.all - e.over65;
    }
  }
  return std::nullopt;
}

MortalitySeries parse_mortality_csv(std::istream& source, const ColumnMap& mapping,
                                    const SeriesDefaults& defaults) {
  const CsvTable table = read_csv(source);
  const auto date_col = table.column(mapping.date);
  const auto deaths_col = table.column(mapping.deaths);
  if (!date_col)
    throw Error(ErrorCode::MissingColumn, "missing column '" + mapping.date + "'", 0);
  if (!deaths_col)
    throw Error(ErrorCode::MissingColumn, "missing column '" + mapping.deaths + "'", 0);
  const auto pop_col = table.column(mapping.population);
  const auto country_col = table.column(mapping.country);
  const auto age_col = table.column(mapping.age_group);
  if (table.rows.empty())
    throw Error(ErrorCode::EmptyInput, "CSV has a header but no data rows");

  MortalitySeries s;
  s.country = defaults.country;
  s.age_group = defaults.age_group;
  std::optional<std::int64_t> population;
  std::optional<Date> prev;
  int step = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    Date d{};
    try {
      d = parse_iso_date(row[*date_col]);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidValue, e.what(), row_no);
    }
    if (prev) {
      const int delta = static_cast<int>((d - *prev).count());
      if (delta <= 0)
        throw Error(ErrorCode::NonMonotoneDates, "dates must be strictly increasing", row_no);
      if (step == 0) {
        const int expected = defaults.cadence ? (*defaults.cadence == Cadence::daily ? 1 : 7)
                                              : (delta == 7 ? 7 : 1);
        if (delta != expected)
          throw Error(ErrorCode::GapInDates,
                      "date step of " + std::to_string(delta) + " days (expected " +
                          std::to_string(expected) + ")",
                      row_no);
        step = delta;
      } else if (delta != step) {
        throw Error(ErrorCode::GapInDates,
                    "date step of " + std::to_string(delta) + " days (expected " +
                        std::to_string(step) + ")",
                    row_no);
      }
    } else {
      s.start_date = d;
    }
    prev = d;

    const std::int64_t count = parse_count(row[*deaths_col], row_no, "deaths");
    if (count < 0)
      throw Error(ErrorCode::NegativeCount, "negative death count", row_no);
    s.counts.push_back(count);

    if (pop_col && !row[*pop_col].empty()) {
      const std::int64_t p = parse_count(row[*pop_col], row_no, "population");
      if (p <= 0)
        throw Error(ErrorCode::InvalidValue, "population must be positive", row_no);
      if (population && *population != p)
        throw Error(ErrorCode::InvalidValue, "population must be constant within a series",
                    row_no);
      population = p;
    }
    if (country_col) {
      if (r == 0)
        s.country = row[*country_col];
      else if (row[*country_col] != s.country)
        throw Error(ErrorCode::InvalidValue, "country must be constant within a series",
                    row_no);
    }
    if (age_col) {
      AgeGroup a{};
      try {
        a = parse_age_group(row[*age_col]);
      } catch (const Error& e) {
        throw Error(ErrorCode::InvalidValue, e.what(), row_no);
      }
      if (r == 0)
        s.age_group = a;
      else if (a != s.age_group)
        throw Error(ErrorCode::InvalidValue, "age_group must be constant within a series",
                    row_no);
    }
  }
  if (step == 0)
    step = defaults.cadence && *defaults.cadence == Cadence::weekly ? 7 : 1;
  s.cadence = step == 7 ? Cadence::weekly : Cadence::daily;

  if (!population)
    population = defaults.population;
  if (!population)
    population = reference_population(s.country, s.age_group);
  if (!population)
    throw Error(ErrorCode::MissingColumn,
                "no '" + mapping.population + "' column and no known population for country '" +
                    s.country + "'",
                0);
  s.population = *population;
  return s;
}

MortalitySeries read_mortality_csv(const std::filesystem::path& path, const ColumnMap& mapping,
                                   const SeriesDefaults& defaults) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  return parse_mortality_csv(in, mapping, defaults);
}

void write_mortality_csv(std::ostream& out, const MortalitySeries& s) {
  write_csv_row(out, {"date", "deaths", "population", "country", "age_group"});
  const std::string pop = std::to_string(s.population);
  const std::string age{to_string(s.age_group)};
  for (std::size_t i = 0; i < s.size(); ++i)
    write_csv_row(out, {format_iso_date(s.date_at(i)), std::to_string(s.counts[i]), pop,
                        s.country, age});
}

RateSeries to_rate_per_million(const MortalitySeries& s) {
  if (s.population <= 0)
    throw Error(ErrorCode::InvalidValue, "population must be positive");
  RateSeries r{s.country, s.age_group, s.cadence, s.start_date, {}};
  r.values.reserve(s.size());
  const double pop = static_cast<double>(s.population);
  for (std::int64_t c : s.counts)
    r.values.push_back(static_cast<double>(c) * 1e6 / pop);
  return r;
}

MortalitySeries aggregate_daily_to_weekly(const MortalitySeries& s) {
  if (s.cadence != Cadence::daily)
    throw Error(ErrorCode::NotDaily, "aggregation requires daily cadence");
  const auto dow = weekday{s.start_date}.iso_encoding(); // Monday = 1
  const std::size_t head = std::min<std::size_t>((8 - dow) % 7, s.size());
  const std::size_t whole = (s.size() - head) / 7;
  MortalitySeries w = s;
  w.cadence = Cadence::weekly;
  w.start_date = s.start_date + days{static_cast<int>(head)};
  w.trimmed_head = head;
  w.trimmed_tail = s.size() - head - whole * 7;
  w.counts.assign(whole, 0);
  for (std::size_t k = 0; k < whole; ++k)
    for (std::size_t d = 0; d < 7; ++d)
      w.counts[k] += s.counts[head + 7 * k + d];
  return w;
}

WeeklyPanel to_weekly_panel(const MortalitySeries& s) {
  return make_panel(s.cadence, s.start_date, s.values());
}

WeeklyPanel to_weekly_panel(const RateSeries& s) {
  return make_panel(s.cadence, s.start_date, s.values);
}

MortalitySeries select_years(const MortalitySeries& s, int first_year, int last_year) {
  MortalitySeries out = s;
  out.counts.clear();
  out.trimmed_head = out.trimmed_tail = 0;
  bool started = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int y = year_of(s, i);
    if (y < first_year || y > last_year)
      continue;
    if (!started) {
      out.start_date = s.date_at(i);
      started = true;
    }
    out.counts.push_back(s.counts[i]);
  }
  if (!started)
    throw Error(ErrorCode::UnknownYear, "no entries in years " + std::to_string(first_year) +
                                            "-" + std::to_string(last_year));
  return out;
}

std::vector<bool> flag_holiday_weeks(const MortalitySeries& s) {
  std::vector<bool> flags(s.size(), false);
  int cached_year = 0;
  std::vector<int> weeks;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const IsoWeek w = iso_week(s.date_at(i));
    if (w.year != cached_year) {
      weeks = holiday_weeks(s.country, w.year);
      cached_year = w.year;
    }
    flags[i] = std::find(weeks.begin(), weeks.end(), w.week) != weeks.end();
  }
  return flags;
}

} // namespace emt
