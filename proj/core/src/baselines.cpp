#include "emt/baselines.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace emt {

namespace {

void check_years(const WeeklyPanel& panel, std::span<const int> years) {
  if (years.empty())
    throw Error(ErrorCode::InvalidArgument, "baseline needs at least one year");
  for (int y : years)
    if (!panel.has_year(y))
      throw Error(ErrorCode::UnknownYear, "year " + std::to_string(y) + " not in panel");
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
}

std::string join_years(const std::vector<int>& years) {
  std::string out;
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (i)
      out += ';';
    out += std::to_string(years[i]);
  }
  return out;
}

} // namespace

std::string_view to_string(BaselineMethod method) {
  return method == BaselineMethod::quantile ? "quantile" : "hist";
}

bool Baseline::covers_week(int iso_week) const noexcept {
  return iso_week >= 1 && static_cast<std::size_t>(iso_week) <= values.size();
}

double Baseline::at_week(int iso_week) const {
  if (!covers_week(iso_week))
    throw Error(ErrorCode::LengthMismatch,
                "baseline has no value for ISO week " + std::to_string(iso_week));
  return values[static_cast<std::size_t>(iso_week - 1)];
}

double lower_quantile(std::span<const double> values, double q) {
  check_q(q);
  if (values.empty())
    throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  const auto m = values.size();
  auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(m)));
  k = std::clamp<std::size_t>(k, 1, m);
  std::vector<double> v(values.begin(), values.end());
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

double median(std::vector<double> values) {
  if (values.empty())
    throw Error(ErrorCode::EmptyInput, "median of an empty sample");
  std::sort(values.begin(), values.end());
  const auto m = values.size();
  return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

Baseline historical_baseline(const WeeklyPanel& panel, std::span<const int> years) {
  check_years(panel, years);
  Baseline b;
  b.method = BaselineMethod::historical_mean;
  b.years_used.assign(years.begin(), years.end());
  std::sort(b.years_used.begin(), b.years_used.end());
  std::size_t weeks = 52;
  for (int y : years)
    weeks = std::max(weeks, panel.row(y).size());
  std::vector<double> sum(weeks, 0.0);
  std::vector<int> n(weeks, 0);
  for (int y : b.years_used) {
    const auto& row = panel.row(y);
    for (std::size_t w = 0; w < row.size(); ++w) {
      sum[w] += row[w];
      ++n[w];
    }
  }
  b.values.resize(weeks);
  for (std::size_t w = 0; w < weeks; ++w)
    b.values[w] = sum[w] / n[w];
  return b;
}

std::map<int, double> per_year_quantiles(const WeeklyPanel& panel, double q) {
  check_q(q);
  std::map<int, double> out;
  for (std::size_t i = 0; i < panel.years.size(); ++i)
    out[panel.years[i]] = lower_quantile(panel.rows[i], q);
  return out;
}

Baseline quantile_baseline(const WeeklyPanel& panel, std::span<const int> years, double q) {
  check_years(panel, years);
  check_q(q);
  std::vector<double> levels;
  for (int y : years)
    levels.push_back(lower_quantile(panel.row(y), q));
  Baseline b;
  b.method = BaselineMethod::quantile;
  b.q = q;
  b.years_used.assign(years.begin(), years.end());
  std::sort(b.years_used.begin(), b.years_used.end());
  b.values.assign(53, median(std::move(levels)));
  return b;
}

Baseline build_baseline(const WeeklyPanel& panel, const BaselineSpec& spec) {
  return spec.method == BaselineMethod::quantile ? quantile_baseline(panel, spec.years, spec.q)
                                                 : historical_baseline(panel, spec.years);
}

Baseline exclude_years(const WeeklyPanel& panel, const BaselineSpec& spec,
                       std::span<const int> years_to_drop) {
  for (int y : years_to_drop)
    if (!panel.has_year(y) ||
        std::find(spec.years.begin(), spec.years.end(), y) == spec.years.end())
      throw Error(ErrorCode::UnknownYear,
                  "cannot exclude year " + std::to_string(y) + ": not in the baseline years");
  BaselineSpec reduced = spec;
  std::erase_if(reduced.years, [&](int y) {
    return std::find(years_to_drop.begin(), years_to_drop.end(), y) != years_to_drop.end();
  });
  if (reduced.years.empty())
    throw Error(ErrorCode::AllYearsExcluded, "every baseline year was excluded");
  Baseline b = build_baseline(panel, reduced);
  b.excluded_years.assign(years_to_drop.begin(), years_to_drop.end());
  std::sort(b.excluded_years.begin(), b.excluded_years.end());
  b.excluded_years.erase(std::unique(b.excluded_years.begin(), b.excluded_years.end()),
                         b.excluded_years.end());
  return b;
}

void write_baseline_csv(std::ostream& out, const Baseline& b) {
  write_csv_row(out, {"week", "level", "method", "q", "years", "excluded"});
  const std::string method{to_string(b.method)};
  const std::string q = b.q ? format_number(*b.q) : "";
  const std::string years = join_years(b.years_used);
  const std::string excluded = join_years(b.excluded_years);
  for (std::size_t w = 0; w < b.values.size(); ++w)
    write_csv_row(out, {std::to_string(w + 1), format_number(b.values[w]), method, q, years,
                        excluded});
}

} // namespace emt
