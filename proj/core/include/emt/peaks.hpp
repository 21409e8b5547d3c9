#pragma once

#include "emt/calendar.hpp"
#include "emt/tautstring.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace emt {

/// One peak of a piecewise-constant fit flanked by two local minima.
///
/// The start is the right end of the preceding minimum interval and the end
/// the left end of the following one. Start and end levels are read from the
/// run just inside the epidemic (index start + 1 and end - 1), because the
/// start and end indices themselves still sit on the minimum plateau.
struct Epidemic {
  std::size_t start_index = 0;
  std::size_t peak_index = 0;
  std::size_t end_index = 0;
  double start_level = 0.0;
  double peak_level = 0.0;
  double end_level = 0.0;
  std::size_t duration = 0;     // end_index - start_index
  std::int64_t total_deaths = 0; // raw counts summed over [start, end]
};

struct ExtremeMidpoint {
  ExtremeKind kind;
  std::size_t midpoint;
};

/// floor((left + right) / 2) of every extreme interval, in order.
std::vector<ExtremeMidpoint> extreme_midpoints(const PiecewiseConstantFit& fit);

/// One epidemic per maximum interval with minimum intervals on both sides.
/// Returns an empty list when there is no such peak.
std::vector<Epidemic> segment_epidemics(const PiecewiseConstantFit& fit,
                                        std::span<const std::int64_t> counts);

/// `start_date,peak_date,end_date,start_level,peak_level,end_level,duration_days,total_deaths`,
/// with index 0 mapped to `anchor` and one index per `step_days`.
void write_epidemic_csv(std::ostream& out, std::span<const Epidemic> epidemics, Date anchor,
                        int step_days = 1);

/// `kind,left,right,midpoint,level`.
void write_extremes_csv(std::ostream& out, const PiecewiseConstantFit& fit);

/// `index,count,level,residual`.
void write_fit_csv(std::ostream& out, const PiecewiseConstantFit& fit,
                   std::span<const double> counts);

} // namespace emt
