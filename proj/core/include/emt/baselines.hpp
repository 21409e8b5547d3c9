#pragma once

#include "emt/ingest.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace emt {

enum class BaselineMethod { historical_mean, quantile };

std::string_view to_string(BaselineMethod method);

/// Expected deaths per ISO week, in the units of the panel it was built from.
/// `values[w - 1]` is the level for ISO week w. Historical baselines carry 53
/// entries only when at least one contributing year has a week 53; quantile
/// baselines always carry 53 identical entries.
struct Baseline {
  BaselineMethod method = BaselineMethod::historical_mean;
  std::vector<double> values;
  std::vector<int> years_used;
  std::optional<double> q;
  std::vector<int> excluded_years;

  bool covers_week(int iso_week) const noexcept;
  double at_week(int iso_week) const;
};

/// Which baseline to build and from which years.
struct BaselineSpec {
  BaselineMethod method = BaselineMethod::historical_mean;
  std::vector<int> years;
  double q = 0.10;
};

/// The ceil(q * m)-th smallest of m values (the minimum for q = 0).
double lower_quantile(std::span<const double> values, double q);

double median(std::vector<double> values);

Baseline historical_baseline(const WeeklyPanel& panel, std::span<const int> years);

/// Lower empirical q-quantile of every year's weekly values.
std::map<int, double> per_year_quantiles(const WeeklyPanel& panel, double q);

/// Median over `years` of the per-year q-quantiles, replicated over 53 weeks.
Baseline quantile_baseline(const WeeklyPanel& panel, std::span<const int> years, double q);

Baseline build_baseline(const WeeklyPanel& panel, const BaselineSpec& spec);

/// Rebuilds `spec` on its year set minus `years_to_drop`.
Baseline exclude_years(const WeeklyPanel& panel, const BaselineSpec& spec,
                       std::span<const int> years_to_drop);

/// `week,level,method,q,years,excluded`; years are joined with ';'.
void write_baseline_csv(std::ostream& out, const Baseline& baseline);

} // namespace emt
