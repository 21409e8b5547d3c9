#include "emt/error.hpp"
#include "emt/ingest.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace emt;

namespace {

ErrorCode code_of(const std::string& csv, const SeriesDefaults& d = {}) {
  std::istringstream in(csv);
  try {
    parse_mortality_csv(in, {}, d);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::IoError;
}

std::optional<std::size_t> row_of(const std::string& csv) {
  std::istringstream in(csv);
  try {
    parse_mortality_csv(in);
  } catch (const Error& e) {
    return e.row();
  }
  return std::nullopt;
}

} // namespace

TEST_CASE("four daily rows") {
  std::istringstream in("date,deaths,population\n2020-01-01,10,1000\n2020-01-02,11,1000\n"
                        "2020-01-03,12,1000\n2020-01-04,13,1000\n");
  const MortalitySeries s = parse_mortality_csv(in);
  CHECK(s.size() == 4);
  CHECK(s.cadence == Cadence::daily);
  CHECK(s.counts == std::vector<std::int64_t>{10, 11, 12, 13});
  CHECK(s.population == 1000);
  CHECK(format_iso_date(s.date_at(3)) == "2020-01-04");
}

TEST_CASE("validation errors carry codes and rows") {
  const std::string gap = "date,deaths,population\n2020-01-01,1,9\n2020-01-02,1,9\n2020-01-04,1,9\n";
  CHECK(code_of(gap) == ErrorCode::GapInDates);
  CHECK(row_of(gap) == 3u);
  CHECK(code_of("date,deaths,population\n2020-01-02,1,9\n2020-01-01,1,9\n") ==
        ErrorCode::NonMonotoneDates);
  CHECK(code_of("date,deaths,population\n2020-01-01,-1,9\n2020-01-02,1,9\n") ==
        ErrorCode::NegativeCount);
  CHECK(code_of("date,population\n2020-01-01,9\n") == ErrorCode::MissingColumn);
  CHECK(code_of("date,deaths,population\n") == ErrorCode::EmptyInput);
  CHECK(code_of("date,deaths,population\n2020-01-01,1.5,9\n") == ErrorCode::InvalidValue);
  CHECK(code_of("date,deaths,population\n2020-01-01,x,9\n") == ErrorCode::InvalidValue);
  CHECK(code_of("date,deaths\n2020-01-01,1\n") == ErrorCode::MissingColumn);
  CHECK(code_of("date,deaths,population\n2020-01-01,1,9\n2020-01-02,1,10\n") ==
        ErrorCode::InvalidValue);
}

TEST_CASE("population falls back to defaults and the reference table") {
  std::istringstream a("date,deaths\n2020-01-06,1\n2020-01-13,2\n");
  SeriesDefaults d;
  d.country = "de";
  const MortalitySeries s = parse_mortality_csv(a, {}, d);
  CHECK(s.cadence == Cadence::weekly);
  CHECK(s.population == *reference_population("de", AgeGroup::all));
  CHECK(*reference_population("ew", AgeGroup::under65) ==
        *reference_population("ew", AgeGroup::all) - *reference_population("ew", AgeGroup::over65));
  CHECK_FALSE(reference_population("fr", AgeGroup::all).has_value());
}

TEST_CASE("custom column names") {
  ColumnMap m;
  m.date = "day";
  m.deaths = "n";
  std::istringstream in2("day,n\n2020-01-01,5\n2020-01-02,6\n");
  SeriesDefaults d;
  d.population = 100;
  const auto s = parse_mortality_csv(in2, m, d);
  CHECK(s.counts == std::vector<std::int64_t>{5, 6});
}

TEST_CASE("rates per million") {
  MortalitySeries s = fixture::weekly(2020, {11800, 0}, 59'000'000);
  const RateSeries r = to_rate_per_million(s);
  CHECK(r.values[0] == 200.0);
  CHECK(r.values[1] == 0.0);
  // daily 10% quantile 1289, times seven, per 59 million
  CHECK(1289.0 * 7.0 / 59.0 == doctest::Approx(152.9).epsilon(0.0005));
}

TEST_CASE("daily to weekly aggregation") {
  MortalitySeries d;
  d.cadence = Cadence::daily;
  d.population = 1000;
  d.start_date = parse_iso_date("2020-01-06"); // Monday
  d.counts.assign(14, 100);
  auto w = aggregate_daily_to_weekly(d);
  CHECK(w.counts == std::vector<std::int64_t>{700, 700});
  d.counts = {1, 2, 3, 4, 5, 6, 7};
  CHECK(aggregate_daily_to_weekly(d).counts == std::vector<std::int64_t>{28});

  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 50; ++rep) {
    d.start_date = parse_iso_date("2020-01-01") + std::chrono::days{static_cast<int>(gen() % 7)};
    d.counts.resize(21 + gen() % 10);
    for (auto& c : d.counts)
      c = static_cast<std::int64_t>(gen() % 1000);
    w = aggregate_daily_to_weekly(d);
    // chunked-sum oracle starting at the first Monday
    const std::chrono::year_month_day ymd{d.start_date};
    const int dow = oracle::day_of_week(static_cast<int>(ymd.year()),
                                        static_cast<int>(static_cast<unsigned>(ymd.month())),
                                        static_cast<int>(static_cast<unsigned>(ymd.day())));
    const std::size_t head = static_cast<std::size_t>((7 - dow) % 7);
    std::vector<std::int64_t> expect;
    for (std::size_t k = head; k + 7 <= d.counts.size(); k += 7) {
      std::int64_t sum = 0;
      for (std::size_t j = k; j < k + 7; ++j)
        sum += d.counts[j];
      expect.push_back(sum);
    }
    REQUIRE(w.counts == expect);
    CHECK(w.trimmed_head == head);
    CHECK(w.trimmed_head + 7 * w.counts.size() + w.trimmed_tail == d.counts.size());
    CHECK(is_monday(w.start_date));
  }
  CHECK_THROWS_AS(aggregate_daily_to_weekly(w), Error);
}

TEST_CASE("weekly panels") {
  const auto counts = fixture::seasonal_weeks(2016, 2019, 100, 1);
  const auto s = fixture::weekly(2016, counts);
  const WeeklyPanel p = to_weekly_panel(s);
  CHECK(p.years == std::vector<int>{2016, 2017, 2018, 2019});
  CHECK(p.row(2019).size() == 52);
  CHECK_THROWS_AS(p.row(2020), Error);

  const auto s15 = fixture::weekly(2015, fixture::seasonal_weeks(2015, 2016, 100, 2));
  const WeeklyPanel p15 = to_weekly_panel(s15);
  CHECK(p15.row(2015).size() == 53);

  auto partial = s;
  partial.start_date = iso_week_monday(2016, 20);
  try {
    to_weekly_panel(partial);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PartialYear);
  }
  auto truncated = s;
  truncated.counts.pop_back();
  CHECK_THROWS_AS(to_weekly_panel(truncated), Error);
}

TEST_CASE("year selection and holiday flags") {
  const auto s = fixture::weekly(2015, fixture::seasonal_weeks(2015, 2020, 100, 3), 59'000'000, "ew");
  const auto sel = select_years(s, 2016, 2019);
  CHECK(sel.size() == static_cast<std::size_t>(fixture::weeks_between(2016, 2019)));
  CHECK(iso_week(sel.start_date) == IsoWeek{2016, 1});
  CHECK_THROWS_AS(select_years(s, 1990, 1991), Error);
  const auto flags = flag_holiday_weeks(sel);
  CHECK(std::count(flags.begin(), flags.end(), true) >= 16);
  const auto y19 = select_years(sel, 2019, 2019);
  const auto f19 = flag_holiday_weeks(y19);
  CHECK(f19[16]);  // week 17, Easter Monday
  CHECK_FALSE(f19[17]);
}

TEST_CASE("write then read round-trips") {
  const auto s = fixture::weekly(2016, {5, 6, 7}, 1234, "be");
  std::ostringstream out;
  write_mortality_csv(out, s);
  std::istringstream in(out.str());
  const auto r = parse_mortality_csv(in);
  CHECK(r.counts == s.counts);
  CHECK(r.population == 1234);
  CHECK(r.country == "be");
  CHECK(r.start_date == s.start_date);
}
