#include "emt/cli.hpp"

#include "emt/baselines.hpp"
#include "emt/csv.hpp"
#include "emt/diagnostics.hpp"
#include "emt/error.hpp"
#include "emt/ingest.hpp"
#include "emt/isotone.hpp"
#include "emt/output.hpp"
#include "emt/peaks.hpp"
#include "emt/plot.hpp"
#include "emt/scores.hpp"
#include "emt/tautstring.hpp"
#include "emt/tvsmooth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace emt::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCommands = {"ingest", "baseline", "excess",  "pscore",
                                            "zscore", "peaks",    "dispersion", "select",
                                            "smooth", "compare-zp", "report"};

bool needs_seed(const std::string& command) {
  return command == "dispersion" || command == "compare-zp" || command == "report";
}

int parse_year(std::string_view text) {
  int y = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), y);
  if (ec != std::errc{} || p != text.data() + text.size() || text.size() != 4)
    throw Error(ErrorCode::InvalidArgument, "bad year '" + std::string(text) + "'");
  return y;
}

struct YearSpan {
  int first;
  int last;
};

YearSpan parse_year_span(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "--years expects YYYY-YYYY");
  const YearSpan s{parse_year(text.substr(0, dash)), parse_year(text.substr(dash + 1))};
  if (s.first > s.last)
    throw Error(ErrorCode::InvalidArgument, "--years range is reversed");
  return s;
}

std::vector<int> parse_year_list(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_year(text.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// Everything the subcommands need, checked before any computation.
struct Plan {
  RunConfig cfg;
  AgeGroup age = AgeGroup::all;
  BaselineMethod method = BaselineMethod::historical_mean;
  std::optional<YearSpan> years;
  std::vector<int> exclude;
  std::optional<WeekRange> weeks;
  fs::path out;
};

Plan validate(const RunConfig& cfg) {
  Plan p;
  p.cfg = cfg;
  p.age = parse_age_group(cfg.age);
  if (cfg.method == "hist")
    p.method = BaselineMethod::historical_mean;
  else if (cfg.method == "quantile")
    p.method = BaselineMethod::quantile;
  else
    throw Error(ErrorCode::InvalidArgument, "--method must be hist or quantile");
  if (!(cfg.q >= 0.0 && cfg.q <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "--q must lie in [0, 1]");
  if (!cfg.years.empty())
    p.years = parse_year_span(cfg.years);
  if (!cfg.exclude.empty())
    p.exclude = parse_year_list(cfg.exclude);
  if (!cfg.weeks.empty())
    p.weeks = parse_week_range(cfg.weeks);
  if (!(cfg.tau > 0.0))
    throw Error(ErrorCode::InvalidArgument, "--tau must be positive");
  if (cfg.nsim < 1)
    throw Error(ErrorCode::InvalidArgument, "--nsim must be positive");
  if (cfg.order != 1 && cfg.order != 2)
    throw Error(ErrorCode::InvalidArgument, "--order must be 1 or 2");
  if (needs_seed(cfg.command) && !cfg.seed)
    throw Error(ErrorCode::InvalidArgument, "--seed is required for " + cfg.command);
  if (cfg.command != "compare-zp") {
    if (cfg.inputs.empty())
      throw Error(ErrorCode::InvalidArgument, "--input is required for " + cfg.command);
    if (cfg.inputs.size() > 1 && cfg.command != "pscore")
      throw Error(ErrorCode::InvalidArgument, "only pscore accepts several --input files");
    for (const std::string& in : cfg.inputs)
      if (!fs::is_regular_file(in))
        throw Error(ErrorCode::InvalidArgument, "input file not found: " + in);
  }
  p.out = cfg.out;
  return p;
}

// ---------------------------------------------------------------------------
// data plumbing

MortalitySeries load(const Plan& p, const std::string& path) {
  SeriesDefaults defaults;
  defaults.country = p.cfg.country;
  defaults.age_group = p.age;
  MortalitySeries s = read_mortality_csv(path, {}, defaults);
  if (!p.cfg.country.empty() && s.country != p.cfg.country)
    throw Error(ErrorCode::InvalidArgument,
                "input holds country '" + s.country + "', not '" + p.cfg.country + "'");
  if (s.age_group != p.age)
    throw Error(ErrorCode::InvalidArgument, "input holds age group " +
                                                std::string(to_string(s.age_group)) + ", not " +
                                                p.cfg.age);
  validate(s);
  return s;
}

MortalitySeries as_weekly(const MortalitySeries& s) {
  return s.cadence == Cadence::weekly ? s : aggregate_daily_to_weekly(s);
}

int last_iso_year(const MortalitySeries& w) { return iso_week(w.date_at(w.size() - 1)).year; }

int first_full_iso_year(const MortalitySeries& w) {
  const IsoWeek first = iso_week(w.date_at(0));
  return first.week == 1 ? first.year : first.year + 1;
}

// Baseline and evaluation year for a weekly series.
struct Scenario {
  MortalitySeries weekly;
  MortalitySeries target;
  int target_year = 0;
  BaselineSpec spec;
  WeeklyPanel counts;
};

Scenario scenario(const Plan& p, const MortalitySeries& raw) {
  Scenario sc;
  sc.weekly = as_weekly(raw);
  sc.target_year = last_iso_year(sc.weekly);
  YearSpan span{first_full_iso_year(sc.weekly), sc.target_year - 1};
  if (p.years)
    span = *p.years;
  if (span.first > span.last)
    throw Error(ErrorCode::TooShort, "no complete baseline year before " +
                                         std::to_string(sc.target_year));
  sc.spec.method = p.method;
  sc.spec.q = p.cfg.q;
  for (int y = span.first; y <= span.last; ++y)
    sc.spec.years.push_back(y);
  sc.counts = to_weekly_panel(select_years(sc.weekly, span.first, span.last));
  sc.target = select_years(sc.weekly, sc.target_year, sc.target_year);
  return sc;
}

Baseline make_baseline(const WeeklyPanel& panel, const Plan& p, const BaselineSpec& spec) {
  return p.exclude.empty() ? build_baseline(panel, spec) : exclude_years(panel, spec, p.exclude);
}

WeekRange default_weeks(const ExcessSeries& e) {
  return {e.weeks.front().week, e.weeks.back().week};
}

std::string label(const MortalitySeries& s) {
  std::string l = s.country.empty() ? "series" : s.country;
  return l + " " + std::string(to_string(s.age_group));
}

fs::path output(const Plan& p, const char* name) { return p.out / name; }

template <class F>
void write_file(const Plan& p, const char* name, F&& body) {
  write_atomic(output(p, name), std::forward<F>(body));
}

std::vector<double> index_axis(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = static_cast<double>(i);
  return x;
}

std::vector<double> week_axis(const ExcessSeries& e) {
  std::vector<double> x;
  for (const IsoWeek& w : e.weeks)
    x.push_back(w.week);
  return x;
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_ingest(const Plan& p, std::ostream& out) {
  const MortalitySeries s = load(p, p.cfg.inputs.front());
  write_file(p, "series.csv", [&](std::ostream& o) { write_mortality_csv(o, s); });
  std::size_t holidays = 0;
  std::optional<MortalitySeries> weekly;
  if (s.cadence == Cadence::daily) {
    weekly = aggregate_daily_to_weekly(s);
    write_file(p, "weekly.csv", [&](std::ostream& o) { write_mortality_csv(o, *weekly); });
  }
  for (bool f : flag_holiday_weeks(weekly ? *weekly : s))
    holidays += f;
  std::ostringstream meta;
  meta << "rows=" << s.size() << '\n'
       << "cadence=" << to_string(s.cadence) << '\n'
       << "first_date=" << format_iso_date(s.date_at(0)) << '\n'
       << "last_date=" << format_iso_date(s.date_at(s.size() - 1)) << '\n'
       << "country=" << s.country << '\n'
       << "age_group=" << to_string(s.age_group) << '\n'
       << "population=" << s.population << '\n'
       << "weekly_trimmed_head_days=" << (weekly ? weekly->trimmed_head : 0) << '\n'
       << "weekly_trimmed_tail_days=" << (weekly ? weekly->trimmed_tail : 0) << '\n'
       << "holiday_weeks_flagged=" << holidays << '\n';
  write_file(p, "ingest.txt", [&](std::ostream& o) { o << meta.str(); });
  out << meta.str();
  if (p.cfg.plot) {
    const auto v = s.values();
    emit_plot({"Deaths", "index", "deaths", {{label(s), index_axis(v.size()), v}}},
              PlotKind::line, output(p, "series.svg"));
  }
}

void cmd_baseline(const Plan& p, std::ostream& out) {
  const MortalitySeries s = load(p, p.cfg.inputs.front());
  Scenario sc = scenario(p, s);
  const MortalitySeries base = select_years(sc.weekly, sc.spec.years.front(), sc.spec.years.back());
  const WeeklyPanel rates = to_weekly_panel(to_rate_per_million(base));
  const Baseline b = make_baseline(rates, p, sc.spec);
  write_file(p, "baseline.csv", [&](std::ostream& o) { write_baseline_csv(o, b); });
  if (p.method == BaselineMethod::quantile) {
    const auto per_year = per_year_quantiles(rates, p.cfg.q);
    write_file(p, "year_quantiles.csv", [&](std::ostream& o) {
      write_csv_row(o, {"year", "quantile_per_million"});
      for (const auto& [year, v] : per_year)
        write_csv_row(o, {std::to_string(year), format_number(v)});
    });
    out << "level_per_million=" << format_number(b.values.front()) << '\n';
  } else {
    double sum = 0.0;
    for (double v : b.values)
      sum += v;
    out << "mean_level_per_million=" << format_number(sum / static_cast<double>(b.values.size()))
        << '\n';
  }
  if (p.cfg.plot) {
    PlotTable t{"Weekly deaths per million", "ISO week", "deaths per million", {}};
    for (std::size_t i = 0; i < rates.years.size(); ++i)
      t.series.push_back({std::to_string(rates.years[i]), index_axis(rates.rows[i].size()),
                          rates.rows[i]});
    t.series.push_back({"baseline", index_axis(b.values.size()), b.values});
    for (auto& ser : t.series)
      for (double& x : ser.x)
        x += 1.0;
    emit_plot(t, PlotKind::line, output(p, "baseline.svg"));
  }
}

void cmd_excess(const Plan& p, std::ostream& out) {
  const MortalitySeries s = load(p, p.cfg.inputs.front());
  const Scenario sc = scenario(p, s);
  const Baseline b = make_baseline(sc.counts, p, sc.spec);
  const ExcessSeries e = excess_series(sc.target, b);
  const WeekRange wr = p.weeks.value_or(default_weeks(e));
  const double total = p.cfg.shift == 0 ? cumulative_excess(e, wr, false)
                                        : shifted_cumulative_excess(sc.target, b, wr, p.cfg.shift);
  write_file(p, "excess.csv", [&](std::ostream& o) { write_score_csv(o, e); });
  std::ostringstream summary;
  summary << "year=" << sc.target_year << '\n'
          << "weeks=" << wr.first << ':' << wr.last << '\n'
          << "shift=" << p.cfg.shift << '\n'
          << "cumulative_excess=" << format_number(total) << '\n'
          << "cumulative_excess_per_million="
          << format_number(total / (static_cast<double>(s.population) / 1e6)) << '\n';
  write_file(p, "excess_summary.txt", [&](std::ostream& o) { o << summary.str(); });
  out << summary.str();
  if (p.cfg.plot)
    emit_plot({"Weekly excess deaths " + std::to_string(sc.target_year), "ISO week", "excess deaths",
               {{label(s), week_axis(e), e.values}}},
              PlotKind::line, output(p, "excess.svg"));
}

void cmd_pscore(const Plan& p, std::ostream& out) {
  PlotTable t{"P-scores", "ISO week", "P-score", {}};
  std::vector<std::pair<std::string, ExcessSeries>> all;
  for (const std::string& in : p.cfg.inputs) {
    const MortalitySeries s = load(p, in);
    const Scenario sc = scenario(p, s);
    const Baseline b = make_baseline(sc.counts, p, sc.spec);
    ExcessSeries e = excess_series(sc.target, b);
    std::vector<double> ps = p_score_series(sc.target, b);
    out << label(s) << " year=" << sc.target_year << " max_p_score="
        << format_number(*std::max_element(ps.begin(), ps.end())) << '\n';
    t.series.push_back({label(s), week_axis(e), std::move(ps)});
    all.emplace_back(s.country, std::move(e));
  }
  write_file(p, "pscore.csv", [&](std::ostream& o) {
    write_csv_row(o, {"country", "week", "deaths", "baseline", "excess", "p_score"});
    for (const auto& [country, e] : all)
      for (std::size_t i = 0; i < e.values.size(); ++i) {
        char wk[16];
        std::snprintf(wk, sizeof wk, "%04d-W%02d", e.weeks[i].year, e.weeks[i].week);
        write_csv_row(o, {country, wk, format_number(e.deaths[i]), format_number(e.baseline[i]),
                          format_number(e.values[i]), format_number(e.values[i] / e.baseline[i])});
      }
  });
  if (p.cfg.plot)
    emit_plot(t, PlotKind::points, output(p, "pscore.svg"));
}

void cmd_zscore(const Plan& p, std::ostream& out) {
  const MortalitySeries s = load(p, p.cfg.inputs.front());
  const Scenario sc = scenario(p, s);
  const Baseline b = make_baseline(sc.counts, p, sc.spec);
  const ExcessSeries e = excess_series(sc.target, b);
  std::vector<double> z(e.values.size());
  double zmax = -kZClamp;
  write_file(p, "zscore.csv", [&](std::ostream& o) {
    write_csv_row(o, {"week", "deaths", "baseline", "z_approx", "z_exact", "p_value", "clamped",
                      "delta_lo", "delta_hi"});
    for (std::size_t i = 0; i < e.values.size(); ++i) {
      const double lambda = e.baseline[i];
      const double za = z_score_poisson(e.deaths[i], lambda);
      const ExactZ ez = z_score_poisson_exact(std::llround(e.deaths[i]), lambda);
      const DeltaInterval ci = delta_confidence_interval(za, lambda, 1.0, 0.95);
      z[i] = ez.z;
      zmax = std::max(zmax, ez.z);
      char wk[16];
      std::snprintf(wk, sizeof wk, "%04d-W%02d", e.weeks[i].year, e.weeks[i].week);
      write_csv_row(o, {wk, format_number(e.deaths[i]), format_number(lambda), format_number(za),
                        format_number(ez.z), format_number(ez.p_value), ez.clamped ? "1" : "0",
                        format_number(ci.lower), format_number(ci.upper)});
    }
  });
  out << "year=" << sc.target_year << " max_z_exact=" << format_number(zmax) << '\n';
  if (p.cfg.plot)
    emit_plot({"Exact Poisson Z-scores", "ISO week", "Z", {{label(s), week_axis(e), z}}},
              PlotKind::points, output(p, "zscore.svg"));
}

struct Fitted {
  MortalitySeries series;
  std::vector<double> y;
  PiecewiseConstantFit taut;
  PiecewiseConstantFit refined;
};

Fitted fit_input(const Plan& p) {
  Fitted f;
  f.series = load(p, p.cfg.inputs.front());
  f.y = f.series.values();
  TautConfig tc;
  tc.tau = p.cfg.tau;
  f.taut = fit_taut_string(f.y, tc);
  f.refined = isotone_refine(f.taut, f.y);
  return f;
}

void cmd_peaks(const Plan& p, const Fitted& f, std::ostream& out) {
  const auto epidemics = segment_epidemics(f.refined, f.series.counts);
  write_file(p, "fit.csv", [&](std::ostream& o) { write_fit_csv(o, f.taut, f.y); });
  write_file(p, "refined_fit.csv", [&](std::ostream& o) { write_fit_csv(o, f.refined, f.y); });
  write_file(p, "extremes.csv", [&](std::ostream& o) { write_extremes_csv(o, f.refined); });
  write_file(p, "epidemics.csv", [&](std::ostream& o) {
    write_epidemic_csv(o, epidemics, f.series.start_date, f.series.step_days());
  });
  out << "n=" << f.y.size() << " modality=" << f.refined.extremes.size()
      << " epidemics=" << epidemics.size() << " squeeze_rounds=" << f.taut.squeeze_rounds
      << " converged=" << (f.taut.converged ? "true" : "false")
      << " sigma_hat=" << format_number(f.taut.sigma_hat) << '\n';
  if (p.cfg.plot) {
    const auto x = index_axis(f.y.size());
    emit_plot({"Taut string fit", "index", "deaths",
               {{"data", x, f.y}, {"taut string", x, f.refined.levels}}},
              PlotKind::line, output(p, "peaks.svg"));
    emit_plot({"Residuals", "index", "residual", {{"residuals", x, f.refined.residuals}}},
              PlotKind::line, output(p, "residuals.svg"));
  }
}

void cmd_dispersion(const Plan& p, const Fitted& f, std::ostream& out) {
  const DispersionReport r = overdispersion_ratio(f.y, f.refined.levels, p.cfg.nsim, *p.cfg.seed);
  write_file(p, "dispersion.csv", [&](std::ostream& o) { write_dispersion_csv(o, r); });
  out << "sd_resid=" << format_number(r.sd_residuals) << " sd_poisson="
      << format_number(r.sd_poisson) << " overdispersion_pct="
      << format_number(r.overdispersion_pct) << '\n';
  if (p.cfg.plot) {
    std::vector<double> sim(f.y.size());
    const auto draw = simulate_poisson_from_fit(f.refined.levels, *p.cfg.seed);
    std::transform(draw.begin(), draw.end(), sim.begin(),
                   [](std::int64_t v) { return static_cast<double>(v); });
    emit_plot({"Poisson process driven by the fit", "index", "deaths",
               {{"simulated", index_axis(sim.size()), sim}}},
              PlotKind::line, output(p, "dispersion.svg"));
  }
}

void cmd_select(const Plan& p, const Fitted& f, std::ostream& out) {
  const std::vector<double>& res = f.refined.residuals;
  constexpr double cutoff = 0.01;
  const SelectionResult harm = gaussian_stepwise_select(res, harmonic_candidates(res.size()), cutoff);
  const std::size_t max_lag = std::min<std::size_t>(500, (res.size() - 1) / 2);
  const LagDesign lags = lag_candidates(res, max_lag);
  const SelectionResult lag = gaussian_stepwise_select(lags.response, lags.candidates, cutoff);
  write_file(p, "select_harmonic.csv", [&](std::ostream& o) { write_selection_csv(o, harm); });
  write_file(p, "select_lag.csv", [&](std::ostream& o) { write_selection_csv(o, lag); });
  out << "harmonics_selected=" << harm.selected.size() << " lags_selected=" << lag.selected.size()
      << '\n';
  if (p.cfg.plot) {
    PlotTable t{"Selected covariates", "period or lag", "-log10 P", {}};
    PlotSeries h{"harmonics", {}, {}}, l{"lags", {}, {}};
    for (const auto& s : harm.selected) {
      h.x.push_back(s.id.period_or_lag());
      h.y.push_back(-std::log10(std::max(s.p_value, 1e-300)));
    }
    for (const auto& s : lag.selected) {
      l.x.push_back(s.id.period_or_lag());
      l.y.push_back(-std::log10(std::max(s.p_value, 1e-300)));
    }
    t.series = {h, l};
    emit_plot(t, PlotKind::points, output(p, "select.svg"));
  }
}

void cmd_smooth(const Plan& p, const Fitted& f, std::ostream& out) {
  const SmoothFit sm = tv_smooth(f.y, f.taut, p.cfg.order);
  write_file(p, "smooth.csv", [&](std::ostream& o) { write_smooth_csv(o, sm, f.y); });
  write_file(p, "solver_meta.txt", [&](std::ostream& o) { write_solver_meta(o, sm); });
  double ss = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < f.y.size(); ++i)
    mean += f.y[i] - sm.values[i];
  mean /= static_cast<double>(f.y.size());
  for (std::size_t i = 0; i < f.y.size(); ++i)
    ss += std::pow(f.y[i] - sm.values[i] - mean, 2);
  out << "order=" << sm.order << " objective=" << format_number(sm.objective)
      << " residual_sd=" << format_number(std::sqrt(ss / static_cast<double>(f.y.size() - 1)))
      << " iterations=" << sm.solver.iterations << '\n';
  if (p.cfg.plot) {
    const auto x = index_axis(f.y.size());
    emit_plot({"Total-variation smoothing", "index", "deaths",
               {{"data", x, f.y}, {"order " + std::to_string(sm.order), x, sm.values}}},
              PlotKind::line, output(p, "smooth.svg"));
  }
}

void cmd_compare_zp(const Plan& p, std::ostream& out) {
  DemoConfig dc;
  dc.seed = *p.cfg.seed;
  dc.replicates = p.cfg.nsim;
  const DemoReport r = population_dependence_demo(dc);
  write_file(p, "compare_zp.csv", [&](std::ostream& o) { write_demo_csv(o, r); });
  out << "z_ratio=" << format_number(r.large.mean_z / r.small.mean_z)
      << " p_ratio=" << format_number(r.large.mean_p / r.small.mean_p) << '\n';
  if (p.cfg.plot) {
    const std::vector<double> x{std::log10(static_cast<double>(r.small.n)),
                                std::log10(static_cast<double>(r.large.n))};
    emit_plot({"Z- and P-scores against population", "log10 population", "mean score",
               {{"Z-score", x, {r.small.mean_z, r.large.mean_z}},
                {"P-score", x, {r.small.mean_p, r.large.mean_p}}}},
              PlotKind::points, output(p, "compare_zp.svg"));
  }
}

void cmd_report(const Plan& p, std::ostream& out) {
  std::ostringstream summary;
  {
    const MortalitySeries s = load(p, p.cfg.inputs.front());
    if (s.cadence == Cadence::weekly) {
      cmd_baseline(p, summary);
      cmd_excess(p, summary);
      cmd_pscore(p, summary);
      cmd_zscore(p, summary);
    } else {
      const Fitted f = fit_input(p);
      cmd_peaks(p, f, summary);
      cmd_dispersion(p, f, summary);
      cmd_select(p, f, summary);
    }
  }
  write_file(p, "report.txt", [&](std::ostream& o) { o << summary.str(); });
  out << summary.str();
}

void dispatch(const Plan& p, std::ostream& out) {
  const std::string& c = p.cfg.command;
  if (c == "ingest") return cmd_ingest(p, out);
  if (c == "baseline") return cmd_baseline(p, out);
  if (c == "excess") return cmd_excess(p, out);
  if (c == "pscore") return cmd_pscore(p, out);
  if (c == "zscore") return cmd_zscore(p, out);
  if (c == "compare-zp") return cmd_compare_zp(p, out);
  if (c == "report") return cmd_report(p, out);
  const Fitted f = fit_input(p);
  if (c == "peaks") return cmd_peaks(p, f, out);
  if (c == "dispersion") return cmd_dispersion(p, f, out);
  if (c == "select") return cmd_select(p, f, out);
  if (c == "smooth") return cmd_smooth(p, f, out);
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + c);
}

void error_line(std::ostream& err, std::string_view code, std::optional<std::size_t> row,
                const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "error: code=" << code << " row=" << (row ? std::to_string(*row) : "-")
      << " message=" << flat << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Excess mortality toolkit", "emt"};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.add_option("subcommand", cfg.command, "One of: ingest baseline excess pscore zscore peaks "
                                            "dispersion select smooth compare-zp report")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--input", cfg.inputs, "Input CSV (pscore accepts several)");
  app.add_option("--country", cfg.country, "Country code expected in the input");
  app.add_option("--age", cfg.age, "Age group: 0+, 65+ or 64-");
  app.add_option("--method,--baseline", cfg.method, "Baseline: hist or quantile");
  app.add_option("--q", cfg.q, "Quantile for the quantile baseline");
  app.add_option("--years", cfg.years, "Baseline years YYYY-YYYY");
  app.add_option("--exclude", cfg.exclude, "Baseline years to drop, YYYY[,YYYY]");
  app.add_option("--weeks", cfg.weeks, "ISO week range A:B");
  app.add_option("--shift", cfg.shift, "Shift of the week range against the baseline");
  app.add_option("--tau", cfg.tau, "Multiresolution threshold multiplier");
  app.add_option("--nsim", cfg.nsim, "Number of simulations or replicates");
  app.add_option("--seed", cfg.seed, "Seed; mandatory for stochastic commands");
  app.add_option("--order", cfg.order, "Smoothing order: 1 or 2");
  app.add_option("--out", cfg.out, "Output directory")->envname("EMT_OUT");
  app.add_flag("--plot", cfg.plot, "Also write SVG plots");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    error_line(err, to_string(ErrorCode::InvalidArgument), std::nullopt, e.what());
    return kExitValidation;
  }

  try {
    const Plan plan = validate(cfg);
    std::error_code ec;
    fs::create_directories(plan.out, ec);
    if (!fs::is_directory(plan.out))
      throw Error(ErrorCode::IoError, "cannot create output directory " + plan.out.string());
    dispatch(plan, out);
    return kExitOk;
  } catch (const Error& e) {
    error_line(err, to_string(e.code()), e.row(), e.what());
    return is_validation_error(e.code()) ? kExitValidation : kExitComputation;
  } catch (const std::exception& e) {
    error_line(err, "Internal", std::nullopt, e.what());
    return kExitComputation;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace emt::cli
