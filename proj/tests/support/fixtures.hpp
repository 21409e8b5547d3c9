#pragma once

#include "emt/calendar.hpp"
#include "emt/ingest.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fixture {

// Weekly series starting in ISO week 1 of `first_year`.
inline emt::MortalitySeries weekly(int first_year, std::vector<std::int64_t> counts,
                                   std::int64_t population = 1'000'000,
                                   std::string country = "xx") {
  emt::MortalitySeries s;
  s.country = std::move(country);
  s.cadence = emt::Cadence::weekly;
  s.start_date = emt::iso_week_monday(first_year, 1);
  s.counts = std::move(counts);
  s.population = population;
  return s;
}

inline int weeks_between(int first_year, int last_year) {
  int n = 0;
  for (int y = first_year; y <= last_year; ++y)
    n += emt::iso_weeks_in_year(y);
  return n;
}

// Seasonal weekly deaths, a winter peak around week 2 and a trough in summer.
inline std::vector<std::int64_t> seasonal_weeks(int first_year, int last_year, double level,
                                                unsigned seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::int64_t> out;
  for (int y = first_year; y <= last_year; ++y)
    for (int w = 1; w <= emt::iso_weeks_in_year(y); ++w) {
      const double mean = level * (1.0 + 0.2 * std::cos(2.0 * 3.141592653589793 * (w - 2) / 52.0));
      std::poisson_distribution<std::int64_t> p(mean);
      out.push_back(p(gen));
    }
  return out;
}

} // namespace fixture
