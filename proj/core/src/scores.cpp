#include "emt/scores.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"
#include "emt/random.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace emt {

namespace {

const boost::math::normal& std_normal() {
  static const boost::math::normal n(0.0, 1.0);
  return n;
}

double phi(double x) { return boost::math::cdf(std_normal(), x); }

// Position of every week of the range inside the excess series.
std::vector<std::size_t> locate(const ExcessSeries& e, WeekRange r) {
  if (r.first > r.last)
    throw Error(ErrorCode::RangeOutOfBounds, "empty week range");
  if (e.weeks.empty())
    throw Error(ErrorCode::RangeOutOfBounds, "empty excess series");
  const int year = e.weeks.front().year;
  if (e.weeks.back().year != year)
    throw Error(ErrorCode::InvalidArgument,
                "cumulative excess needs a series within one ISO year");
  std::vector<std::size_t> idx;
  for (int w = r.first; w <= r.last; ++w) {
    const auto it = std::find(e.weeks.begin(), e.weeks.end(), IsoWeek{year, w});
    if (it == e.weeks.end())
      throw Error(ErrorCode::RangeOutOfBounds,
                  "week " + std::to_string(w) + " not in series for " + std::to_string(year));
    idx.push_back(static_cast<std::size_t>(it - e.weeks.begin()));
  }
  return idx;
}

void require_weekly(const MortalitySeries& s) {
  if (s.cadence != Cadence::weekly)
    throw Error(ErrorCode::NotWeekly, "excess deaths are computed on weekly series");
}

std::string week_label(IsoWeek w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-W%02d", w.year, w.week);
  return buf;
}

} // namespace

WeekRange parse_week_range(std::string_view text) {
  const auto colon = text.find(':');
  auto parse = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
      throw Error(ErrorCode::InvalidArgument, "week range must look like A:B");
    return v;
  };
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "week range must look like A:B");
  WeekRange r{parse(text.substr(0, colon)), parse(text.substr(colon + 1))};
  if (r.first < 1 || r.last > 53 || r.first > r.last)
    throw Error(ErrorCode::RangeOutOfBounds, "week range must satisfy 1 <= A <= B <= 53");
  return r;
}

ExcessSeries excess_series(const MortalitySeries& s, const Baseline& b) {
  require_weekly(s);
  ExcessSeries e;
  e.population = s.population;
  e.method = b.method;
  e.baseline_years = b.years_used;
  e.excluded_years = b.excluded_years;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const IsoWeek w = iso_week(s.date_at(i));
    const double d = static_cast<double>(s.counts[i]);
    double base = 0.0;
    if (b.covers_week(w.week))
      base = b.values[static_cast<std::size_t>(w.week - 1)];
    else if (w.week == 53 && b.covers_week(52) && b.covers_week(1))
      base = 0.5 * (b.values[51] + b.values[0]); // no 53-week year among the baseline years
    else
      throw Error(ErrorCode::LengthMismatch,
                  "baseline has no value for " + week_label(w), i + 1);
    e.weeks.push_back(w);
    e.deaths.push_back(d);
    e.baseline.push_back(base);
    e.values.push_back(d - base);
  }
  return e;
}

double cumulative_excess(const ExcessSeries& e, WeekRange weeks, bool per_million) {
  double sum = 0.0;
  for (std::size_t i : locate(e, weeks))
    sum += e.values[i];
  if (per_million) {
    if (e.population <= 0)
      throw Error(ErrorCode::InvalidValue, "population must be positive");
    sum /= static_cast<double>(e.population) / 1e6;
  }
  return sum;
}

double shifted_cumulative_excess(const MortalitySeries& s, const Baseline& b, WeekRange weeks,
                                 int shift, ShiftMode mode) {
  const ExcessSeries e = excess_series(s, b);
  const WeekRange moved{weeks.first + shift, weeks.last + shift};
  if (moved.first < 1 || !b.covers_week(moved.last))
    throw Error(ErrorCode::RangeOutOfBounds, "shifted range leaves the baseline's weeks");
  if (mode == ShiftMode::move_window)
    return cumulative_excess(e, moved, false);
  double deaths = 0.0;
  for (std::size_t i : locate(e, weeks))
    deaths += e.deaths[i];
  double base = 0.0;
  for (int w = moved.first; w <= moved.last; ++w)
    base += b.at_week(w);
  return deaths - base;
}

std::vector<double> p_score_series(const MortalitySeries& s, const Baseline& b) {
  const ExcessSeries e = excess_series(s, b);
  std::vector<double> p(e.values.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(e.baseline[i] > 0.0))
      throw Error(ErrorCode::ZeroBaseline, "baseline must be positive for P-scores", i + 1);
    p[i] = e.values[i] / e.baseline[i];
  }
  return p;
}

void write_score_csv(std::ostream& out, const ExcessSeries& e) {
  write_csv_row(out, {"week", "deaths", "baseline", "excess", "p_score"});
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    if (!(e.baseline[i] > 0.0))
      throw Error(ErrorCode::ZeroBaseline, "baseline must be positive for P-scores", i + 1);
    write_csv_row(out, {week_label(e.weeks[i]), format_number(e.deaths[i]),
                        format_number(e.baseline[i]), format_number(e.values[i]),
                        format_number(e.values[i] / e.baseline[i])});
  }
}

double z_score_gaussian(double xbar, const GaussianModel& m) {
  if (!(m.sigma > 0.0) || m.n < 1)
    throw Error(ErrorCode::InvalidArgument, "Gaussian model needs sigma > 0 and n >= 1");
  return std::sqrt(static_cast<double>(m.n)) * (xbar - m.mu) / m.sigma;
}

double z_score_poisson(double x, double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  return (x - lambda) / std::sqrt(lambda);
}

double poisson_upper_tail(std::int64_t x, double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (x <= 0)
    return 1.0;
  return boost::math::gamma_p(static_cast<double>(x), lambda);
}

ExactZ z_score_poisson_exact(std::int64_t x, double lambda) {
  if (x < 0)
    throw Error(ErrorCode::InvalidArgument, "count must be non-negative");
  ExactZ out;
  out.p_value = poisson_upper_tail(x, lambda);
  double z = 0.0;
  if (out.p_value >= 1.0) {
    z = -std::numeric_limits<double>::infinity();
  } else if (out.p_value <= 0.0) {
    z = std::numeric_limits<double>::infinity();
  } else if (out.p_value < 0.5) {
    z = boost::math::quantile(boost::math::complement(std_normal(), out.p_value));
  } else {
    // 1 - p = P(X <= x - 1), computed directly to avoid cancellation.
    const double lower = boost::math::gamma_q(static_cast<double>(x), lambda);
    z = lower > 0.0 ? boost::math::quantile(std_normal(), lower)
                    : -std::numeric_limits<double>::infinity();
  }
  if (!(std::fabs(z) <= kZClamp)) {
    z = std::copysign(kZClamp, z);
    out.clamped = true;
  }
  out.z = z;
  return out;
}

double poisson_normal_max_cdf_gap(double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const double sd = std::sqrt(lambda);
  // Left of zero the Poisson CDF is 0 while the normal one reaches Phi(-sqrt(lambda)).
  double gap = phi(-lambda / sd);
  const auto lo = static_cast<std::int64_t>(std::max(0.0, std::floor(lambda - 40.0 * sd - 10.0)));
  const auto hi = static_cast<std::int64_t>(std::ceil(lambda + 40.0 * sd + 10.0));
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double xd = static_cast<double>(x);
    const double below = x == 0 ? 0.0 : boost::math::gamma_q(xd, lambda); // P(X <= x-1)
    const double at = boost::math::gamma_q(xd + 1.0, lambda);             // P(X <= x)
    const double g = phi((xd - lambda) / sd);
    gap = std::max({gap, std::fabs(below - g), std::fabs(at - g)});
  }
  return gap;
}

double lambda_from_population(double n) { return 0.00019 * n; }

DeltaInterval delta_confidence_interval(double z_sc, double lambda, double sigma_od,
                                        double level) {
  if (!(lambda > 0.0) || !(sigma_od >= 1.0) || !(level > 0.0 && level < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "need lambda > 0, sigma_od >= 1 and 0 < level < 1");
  const double zstar =
      boost::math::quantile(boost::math::complement(std_normal(), 0.5 * (1.0 - level)));
  const double a = z_sc / std::sqrt(lambda);
  const double k2 = zstar * zstar * sigma_od * sigma_od / lambda;
  // (delta - a)^2 <= k2 (1 + delta)  <=>  delta^2 - (2a + k2) delta + a^2 - k2 <= 0
  const double disc = k2 * (4.0 * a + k2 + 4.0);
  if (!(disc > 0.0))
    throw Error(ErrorCode::DegenerateInterval, "confidence set for delta is empty");
  const double centre = a + 0.5 * k2;
  const double half = 0.5 * std::sqrt(disc);
  DeltaInterval ci{centre - half, centre + half};
  if (ci.upper <= -1.0)
    throw Error(ErrorCode::DegenerateInterval, "confidence set lies at delta <= -1");
  ci.lower = std::max(ci.lower, -1.0);
  return ci;
}

DemoReport population_dependence_demo(const DemoConfig& c) {
  if (c.n_small < 100'000 || c.n_large < 100'000)
    throw Error(ErrorCode::InvalidArgument, "populations must be at least 1e5");
  if (c.replicates < 1 || !(c.delta > -1.0) || !(c.sigma_od >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "invalid demo configuration");
  auto run = [&](std::int64_t n, std::uint64_t population_id) {
    const double lambda = lambda_from_population(static_cast<double>(n));
    const double mean = lambda * (1.0 + c.delta);
    const double extra = c.sigma_od * c.sigma_od - 1.0;
    DemoRow row;
    row.n = n;
    row.delta = c.delta;
    int covered = 0, intervals = 0;
    for (int r = 0; r < c.replicates; ++r) {
      CounterRng rng(c.seed, static_cast<std::uint64_t>(r) * 2 + population_id);
      const double intensity = extra > 0.0 ? rng.gamma(mean / extra, extra) : mean;
      const double x = static_cast<double>(rng.poisson(intensity));
      const double z = z_score_poisson(x, lambda);
      row.mean_z += z;
      row.mean_p += (x - lambda) / lambda;
      try {
        const DeltaInterval ci = delta_confidence_interval(z, lambda, c.sigma_od, c.level);
        row.ci_lo += ci.lower;
        row.ci_hi += ci.upper;
        ++intervals;
        covered += ci.contains(c.delta);
      } catch (const Error&) {
        // an empty confidence set does not cover
      }
    }
    const double reps = c.replicates;
    row.mean_z /= reps;
    row.mean_p /= reps;
    if (intervals) {
      row.ci_lo /= intervals;
      row.ci_hi /= intervals;
    }
    row.coverage = covered / reps;
    return row;
  };
  return {run(c.n_small, 0), run(c.n_large, 1)};
}

void write_demo_csv(std::ostream& out, const DemoReport& report) {
  write_csv_row(out, {"n", "delta", "mean_z", "mean_p", "ci_lo", "ci_hi", "coverage"});
  for (const DemoRow* row : {&report.small, &report.large})
    write_csv_row(out, {std::to_string(row->n), format_number(row->delta),
                        format_number(row->mean_z), format_number(row->mean_p),
                        format_number(row->ci_lo), format_number(row->ci_hi),
                        format_number(row->coverage)});
}

} // namespace emt
