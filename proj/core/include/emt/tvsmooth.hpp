#pragma once

#include "emt/isotone.hpp"
#include "emt/lp.hpp"
#include "emt/tautstring.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace emt {

/// Order-fold forward differences at unit spacing.
std::vector<double> discrete_derivative(std::span<const double> values, int order);

struct TvConfig {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-6;
  int max_iterations = 200;
};

struct FeasibilityReport {
  double max_mr = 0.0;    // max |residual sum| / sqrt(variance sum) over the dyadic family
  double threshold = 0.0; // sqrt(tau log n)
  double max_monotone_violation = 0.0;
  bool feasible = false;
};

struct SolverMeta {
  std::string method;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double feasibility_tol = 0.0;
  double optimality_tol = 0.0;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

struct SmoothFit {
  std::vector<double> values;
  int order = 1;
  double objective = 0.0; // sum |order+1 -th difference of values|
  FeasibilityReport feasibility;
  SolverMeta solver;
};

/// Per adjacent pair (i, i+1): the monotone direction the fit must follow.
/// Pairs are split at the midpoints of the fit's extreme intervals; a fit
/// without extremes follows its overall trend.
std::vector<Direction> monotone_pattern(const PiecewiseConstantFit& fit);

/// Minimises the total variation of the order-th discrete derivative of a
/// fit to `counts` subject to the accepted taut-string fit's multiresolution
/// bounds (same noise variances, tau and dyadic family) and its monotone
/// pattern. Solved as a linear program over cumulative sums with
/// solve_inequality_lp(). `order` is 1 (piecewise linear) or 2 (piecewise
/// quadratic).
SmoothFit tv_smooth(std::span<const double> counts, const PiecewiseConstantFit& fit, int order,
                    const TvConfig& config = {});

FeasibilityReport check_smooth_feasibility(std::span<const double> counts,
                                           std::span<const double> values,
                                           const PiecewiseConstantFit& fit);

/// `index,count,smooth_value,residual`.
void write_smooth_csv(std::ostream& out, const SmoothFit& smooth, std::span<const double> counts);
/// key=value lines describing the solve.
void write_solver_meta(std::ostream& out, const SmoothFit& smooth);

} // namespace emt
