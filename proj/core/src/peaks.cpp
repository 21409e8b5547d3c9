#include "emt/peaks.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"

#include <ostream>

namespace emt {

std::vector<ExtremeMidpoint> extreme_midpoints(const PiecewiseConstantFit& fit) {
  std::vector<ExtremeMidpoint> out;
  out.reserve(fit.extremes.size());
  for (const ExtremeInterval& e : fit.extremes)
    out.push_back({e.kind, (e.left + e.right) / 2});
  return out;
}

std::vector<Epidemic> segment_epidemics(const PiecewiseConstantFit& fit,
                                        std::span<const std::int64_t> counts) {
  if (counts.size() != fit.levels.size())
    throw Error(ErrorCode::LengthMismatch, "fit and counts differ in length");
  std::vector<Epidemic> out;
  const auto& ex = fit.extremes;
  for (std::size_t k = 1; k + 1 < ex.size(); ++k) {
    if (ex[k].kind != ExtremeKind::max || ex[k - 1].kind != ExtremeKind::min ||
        ex[k + 1].kind != ExtremeKind::min)
      continue;
    Epidemic e;
    e.start_index = ex[k - 1].right;
    e.end_index = ex[k + 1].left;
    e.peak_index = (ex[k].left + ex[k].right) / 2;
    e.start_level = fit.levels[e.start_index + 1];
    e.end_level = fit.levels[e.end_index - 1];
    e.peak_level = ex[k].level;
    e.duration = e.end_index - e.start_index;
    for (std::size_t i = e.start_index; i <= e.end_index; ++i)
      e.total_deaths += counts[i];
    out.push_back(e);
  }
  return out;
}

void write_epidemic_csv(std::ostream& out, std::span<const Epidemic> epidemics, Date anchor,
                        int step_days) {
  write_csv_row(out, {"start_date", "peak_date", "end_date", "start_level", "peak_level",
                      "end_level", "duration_days", "total_deaths"});
  auto date = [&](std::size_t i) {
    return format_iso_date(anchor + std::chrono::days{static_cast<int>(i) * step_days});
  };
  for (const Epidemic& e : epidemics)
    write_csv_row(out, {date(e.start_index), date(e.peak_index), date(e.end_index),
                        format_fixed(e.start_level, 3), format_fixed(e.peak_level, 3),
                        format_fixed(e.end_level, 3),
                        std::to_string(e.duration * static_cast<std::size_t>(step_days)),
                        std::to_string(e.total_deaths)});
}

void write_extremes_csv(std::ostream& out, const PiecewiseConstantFit& fit) {
  write_csv_row(out, {"kind", "left", "right", "midpoint", "level"});
  for (const ExtremeInterval& e : fit.extremes)
    write_csv_row(out, {std::string(to_string(e.kind)), std::to_string(e.left),
                        std::to_string(e.right), std::to_string((e.left + e.right) / 2),
                        format_number(e.level)});
}

void write_fit_csv(std::ostream& out, const PiecewiseConstantFit& fit,
                   std::span<const double> counts) {
  if (counts.size() != fit.levels.size())
    throw Error(ErrorCode::LengthMismatch, "fit and counts differ in length");
  write_csv_row(out, {"index", "count", "level", "residual"});
  for (std::size_t i = 0; i < counts.size(); ++i)
    write_csv_row(out, {std::to_string(i), format_number(counts[i]),
                        format_number(fit.levels[i]), format_number(counts[i] - fit.levels[i])});
}

} // namespace emt
