#pragma once

#include "emt/baselines.hpp"
#include "emt/calendar.hpp"
#include "emt/ingest.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace emt {

/// Weekly deaths minus baseline; negative values are kept.
struct ExcessSeries {
  std::vector<IsoWeek> weeks;
  std::vector<double> deaths;
  std::vector<double> baseline;
  std::vector<double> values;
  std::int64_t population = 0;
  BaselineMethod method = BaselineMethod::historical_mean;
  std::vector<int> baseline_years;
  std::vector<int> excluded_years;
};

/// Inclusive range of ISO week numbers, written "A:B" on the command line.
struct WeekRange {
  int first = 1;
  int last = 1;
};

WeekRange parse_week_range(std::string_view text);

/// Week 53 of a series falls back to the mean of the week-52 and week-1
/// levels when the baseline was built without any 53-week year.
ExcessSeries excess_series(const MortalitySeries& series, const Baseline& baseline);

/// Sum of weekly excess over `weeks` of a single-year excess series. With
/// `per_million` the sum is divided by population / 1e6.
double cumulative_excess(const ExcessSeries& excess, WeekRange weeks, bool per_million);

enum class ShiftMode {
  /// Deaths of `weeks` against the baseline of `weeks + shift`: the epidemic
  /// is moved in time while the seasonal baseline stays put.
  move_data,
  /// Deaths and baseline both read over `weeks + shift`.
  move_window,
};

double shifted_cumulative_excess(const MortalitySeries& series, const Baseline& baseline,
                                 WeekRange weeks, int shift,
                                 ShiftMode mode = ShiftMode::move_data);

/// (deaths - baseline) / baseline per entry of a weekly series.
std::vector<double> p_score_series(const MortalitySeries& series, const Baseline& baseline);

/// `week,deaths,baseline,excess,p_score`.
void write_score_csv(std::ostream& out, const ExcessSeries& excess);

// ---------------------------------------------------------------------------
// Z-scores

/// i.i.d. N(mu + delta, sigma^2) observations, n of them.
struct GaussianModel {
  double mu = 0.0;
  double sigma = 1.0;
  std::int64_t n = 1;
  double delta = 0.0;
};

double z_score_gaussian(double xbar, const GaussianModel& model);
double z_score_poisson(double x, double lambda);

/// P(X >= x) for X ~ Poisson(lambda), via the regularized lower incomplete
/// gamma function: P(X >= x) = P(x, lambda) for x >= 1.
double poisson_upper_tail(std::int64_t x, double lambda);

struct ExactZ {
  double z = 0.0;
  double p_value = 1.0;
  bool clamped = false;
};

inline constexpr double kZClamp = 38.0;

/// z = Phi^{-1}(1 - p) with p = P(X >= x). Infinite or larger-than-38 values
/// are clamped to +-38 and flagged.
ExactZ z_score_poisson_exact(std::int64_t x, double lambda);

/// sup_t |F_Poisson(t) - Phi((t - lambda) / sqrt(lambda))|.
double poisson_normal_max_cdf_gap(double lambda);

/// Weekly deaths expected in a population of n: 0.00019 n.
double lambda_from_population(double n);

struct DeltaInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double delta) const noexcept { return lower <= delta && delta <= upper; }
};

/// {delta > -1 : |delta - z_sc / sqrt(lambda)| <= z* sigma sqrt((1 + delta) / lambda)}
/// with z* the two-sided standard-normal quantile for `level`. Solved as a
/// quadratic in delta.
DeltaInterval delta_confidence_interval(double z_sc, double lambda, double sigma_od,
                                        double level);

struct DemoConfig {
  double delta = 0.2;
  std::int64_t n_small = 1'000'000;
  std::int64_t n_large = 100'000'000;
  std::uint64_t seed = 1;
  int replicates = 10'000;
  double sigma_od = 1.0;
  double level = 0.95;
};

struct DemoRow {
  std::int64_t n = 0;
  double delta = 0.0;
  double mean_z = 0.0;
  double mean_p = 0.0;
  double ci_lo = 0.0; // mean interval endpoints over replicates
  double ci_hi = 0.0;
  double coverage = 0.0;
};

struct DemoReport {
  DemoRow small;
  DemoRow large;
};

/// Simulates weekly deaths with lambda = 0.00019 n for two populations that
/// share the same relative excess delta and reports mean Z- and P-scores.
/// Overdispersed draws (sigma_od > 1) use a gamma-Poisson mixture with
/// variance sigma_od^2 times the mean.
DemoReport population_dependence_demo(const DemoConfig& config);

/// `n,delta,mean_z,mean_p,ci_lo,ci_hi,coverage`.
void write_demo_csv(std::ostream& out, const DemoReport& report);

} // namespace emt
