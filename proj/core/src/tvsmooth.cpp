#include "emt/tvsmooth.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"
#include "emt/multiresolution.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace emt {

namespace {

// Binomial coefficients with alternating signs: the k-th difference stencil.
std::vector<double> difference_stencil(int k) {
  std::vector<double> c{1.0};
  for (int step = 0; step < k; ++step) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] -= c[i];
      next[i + 1] += c[i];
    }
    c = std::move(next);
  }
  return c;
}

double total_variation(std::span<const double> values, int order) {
  double tv = 0.0;
  for (double d : discrete_derivative(values, order + 1))
    tv += std::fabs(d);
  return tv;
}

} // namespace

std::vector<double> discrete_derivative(std::span<const double> values, int order) {
  if (order < 0)
    throw Error(ErrorCode::InvalidArgument, "derivative order must be non-negative");
  if (values.size() <= static_cast<std::size_t>(order))
    throw Error(ErrorCode::TooShort, "series shorter than the derivative order");
  std::vector<double> v(values.begin(), values.end());
  for (int k = 0; k < order; ++k) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      v[i] = v[i + 1] - v[i];
    v.pop_back();
  }
  return v;
}

std::vector<Direction> monotone_pattern(const PiecewiseConstantFit& fit) {
  const std::size_t n = fit.levels.size();
  std::vector<Direction> dir(n > 0 ? n - 1 : 0, Direction::non_decreasing);
  if (fit.extremes.empty()) {
    if (n > 0 && fit.levels.back() < fit.levels.front())
      std::fill(dir.begin(), dir.end(), Direction::non_increasing);
    return dir;
  }
  auto after = [](ExtremeKind k) {
    return k == ExtremeKind::min ? Direction::non_decreasing : Direction::non_increasing;
  };
  auto before = [](ExtremeKind k) {
    return k == ExtremeKind::min ? Direction::non_increasing : Direction::non_decreasing;
  };
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    while (k < fit.extremes.size() &&
           (fit.extremes[k].left + fit.extremes[k].right) / 2 <= i)
      ++k;
    dir[i] = k == 0 ? before(fit.extremes[0].kind) : after(fit.extremes[k - 1].kind);
  }
  return dir;
}

FeasibilityReport check_smooth_feasibility(std::span<const double> counts,
                                           std::span<const double> values,
                                           const PiecewiseConstantFit& fit) {
  const std::size_t n = counts.size();
  if (values.size() != n || fit.noise_variances.size() != n)
    throw Error(ErrorCode::LengthMismatch, "smooth fit, counts and taut fit differ in length");
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = counts[i] - values[i];
  FeasibilityReport rep;
  rep.threshold = multiresolution_threshold(n, fit.tau);
  rep.max_mr = max_multiresolution_statistic(r, fit.noise_variances);
  double zero_var_violation = 0.0; // intervals with no noise must be matched exactly
  if (std::all_of(fit.noise_variances.begin(), fit.noise_variances.end(),
                  [](double v) { return v == 0.0; }))
    for (double x : r)
      zero_var_violation = std::max(zero_var_violation, std::fabs(x));
  const auto dir = monotone_pattern(fit);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = values[i + 1] - values[i];
    const double bad = dir[i] == Direction::non_decreasing ? -step : step;
    rep.max_monotone_violation = std::max(rep.max_monotone_violation, bad);
  }
  rep.feasible = rep.max_mr <= rep.threshold + 1e-6 && zero_var_violation <= 1e-9 &&
                 rep.max_monotone_violation <= 1e-8;
  return rep;
}

SmoothFit tv_smooth(std::span<const double> counts, const PiecewiseConstantFit& fit, int order,
                    const TvConfig& config) {
  const std::size_t n = counts.size();
  if (order != 1 && order != 2)
    throw Error(ErrorCode::InvalidArgument, "smoothing order must be 1 or 2");
  if (fit.levels.size() != n || fit.noise_variances.size() != n)
    throw Error(ErrorCode::LengthMismatch, "fit does not match the data");
  if (n < static_cast<std::size_t>(order) + 3)
    throw Error(ErrorCode::TooShort, "series too short for this smoothing order");
  {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = counts[i] - fit.levels[i];
    if (!multiresolution_violations(r, fit.noise_variances, fit.tau).empty())
      throw Error(ErrorCode::InvalidArgument,
                  "taut-string fit violates its multiresolution bounds");
  }

  SmoothFit out;
  out.order = order;
  out.solver.feasibility_tol = config.feasibility_tol;
  out.solver.optimality_tol = config.optimality_tol;

  // Zero noise leaves the data as the only admissible fit.
  if (std::all_of(fit.noise_variances.begin(), fit.noise_variances.end(),
                  [](double v) { return v == 0.0; })) {
    out.values.assign(counts.begin(), counts.end());
    out.objective = total_variation(out.values, order);
    out.solver.method = "exact-interpolation";
    out.feasibility = check_smooth_feasibility(counts, out.values, fit);
    return out;
  }

  // Variables: u[k] = F[k] - F_taut[k] for k = 1..n (F cumulative sum of the
  // fit, u[0] = 0), then one TV bound t[j] per (order+2)-th difference of F.
  const int dk = order + 2;
  const std::size_t nt = n + 1 - static_cast<std::size_t>(dk);
  const auto nu = static_cast<Eigen::Index>(n);
  const auto nv = static_cast<Eigen::Index>(n + nt);
  auto ucol = [](std::size_t k) { return static_cast<Eigen::Index>(k - 1); };

  std::vector<double> Ft(n + 1, 0.0), R(n + 1, 0.0), V(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Ft[i + 1] = Ft[i] + fit.levels[i];
    R[i + 1] = R[i] + counts[i];
    V[i + 1] = V[i] + fit.noise_variances[i];
  }
  const double thr = multiresolution_threshold(n, fit.tau);
  const auto stencil = difference_stencil(dk);
  const auto dir = monotone_pattern(fit);
  const auto intervals = dyadic_intervals(n);

  std::vector<Eigen::Triplet<double>> trip;
  std::vector<double> h;
  Eigen::Index row = 0;
  auto add_coef = [&](std::size_t k, double v) {
    if (k > 0)
      trip.emplace_back(row, ucol(k), v);
  };

  // TV rows: +-(D u)_j - t_j <= -+(D F_taut)_j
  for (std::size_t j = 0; j < nt; ++j) {
    double dft = 0.0;
    for (int i = 0; i <= dk; ++i)
      dft += stencil[static_cast<std::size_t>(i)] * Ft[j + static_cast<std::size_t>(i)];
    for (double sign : {1.0, -1.0}) {
      for (int i = 0; i <= dk; ++i)
        add_coef(j + static_cast<std::size_t>(i), sign * stencil[static_cast<std::size_t>(i)]);
      trip.emplace_back(row, nu + static_cast<Eigen::Index>(j), -1.0);
      h.push_back(-sign * dft);
      ++row;
    }
  }
  // Multiresolution rows: |E_I - (u[b+1] - u[a])| <= B_I
  for (const IndexInterval& I : intervals) {
    const double bound = thr * std::sqrt(std::max(0.0, V[I.right + 1] - V[I.left]));
    const double e = (R[I.right + 1] - R[I.left]) - (Ft[I.right + 1] - Ft[I.left]);
    for (double sign : {1.0, -1.0}) {
      add_coef(I.right + 1, sign);
      add_coef(I.left, -sign);
      h.push_back(bound + sign * e);
      ++row;
    }
  }
  // Monotone rows on f[i+1] - f[i] = F[i+2] - 2F[i+1] + F[i]
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double sign = dir[i] == Direction::non_decreasing ? -1.0 : 1.0;
    const double d2 = Ft[i + 2] - 2.0 * Ft[i + 1] + Ft[i];
    add_coef(i + 2, sign);
    add_coef(i + 1, -2.0 * sign);
    add_coef(i, sign);
    h.push_back(-sign * d2);
    ++row;
  }

  InequalityLp lp;
  lp.G.resize(row, nv);
  lp.G.setFromTriplets(trip.begin(), trip.end());
  lp.h = Eigen::Map<const Eigen::VectorXd>(h.data(), row);
  lp.c = Eigen::VectorXd::Zero(nv);
  lp.c.tail(static_cast<Eigen::Index>(nt)).setOnes();

  // Start from the taut string itself with TV bounds one above its own.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nv);
  for (std::size_t j = 0; j < nt; ++j) {
    double dft = 0.0;
    for (int i = 0; i <= dk; ++i)
      dft += stencil[static_cast<std::size_t>(i)] * Ft[j + static_cast<std::size_t>(i)];
    x0(nu + static_cast<Eigen::Index>(j)) = std::fabs(dft) + 1.0;
  }

  LpOptions opt;
  opt.feasibility_tol = config.feasibility_tol;
  opt.optimality_tol = config.optimality_tol;
  opt.max_iterations = config.max_iterations;
  const LpSolution sol = solve_inequality_lp(lp, opt, &x0);

  out.solver.method = kLpMethodName;
  out.solver.iterations = sol.iterations;
  out.solver.primal_residual = sol.primal_residual;
  out.solver.dual_residual = sol.dual_residual;
  out.solver.gap = sol.gap;
  out.solver.variables = static_cast<std::size_t>(nv);
  out.solver.constraints = static_cast<std::size_t>(row);
  if (!sol.converged)
    throw Error(ErrorCode::SolverLimit,
                "interior-point solver stopped after " + std::to_string(sol.iterations) +
                    " iterations");

  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u_hi = sol.x(ucol(i + 1));
    const double u_lo = i == 0 ? 0.0 : sol.x(ucol(i));
    out.values[i] = fit.levels[i] + (u_hi - u_lo);
  }
  out.objective = total_variation(out.values, order);
  out.feasibility = check_smooth_feasibility(counts, out.values, fit);
  if (!out.feasibility.feasible)
    throw Error(ErrorCode::Infeasible,
                "smoothed fit fails the post-solve feasibility check (max_mr " +
                    format_number(out.feasibility.max_mr) + ", threshold " +
                    format_number(out.feasibility.threshold) + ", monotone " +
                    format_number(out.feasibility.max_monotone_violation) + ")");
  return out;
}

void write_smooth_csv(std::ostream& out, const SmoothFit& smooth, std::span<const double> counts) {
  if (counts.size() != smooth.values.size())
    throw Error(ErrorCode::LengthMismatch, "smooth fit and counts differ in length");
  write_csv_row(out, {"index", "count", "smooth_value", "residual"});
  for (std::size_t i = 0; i < counts.size(); ++i)
    write_csv_row(out, {std::to_string(i), format_number(counts[i]),
                        format_number(smooth.values[i]),
                        format_number(counts[i] - smooth.values[i])});
}

void write_solver_meta(std::ostream& out, const SmoothFit& s) {
  out << "method=" << s.solver.method << '\n'
      << "order=" << s.order << '\n'
      << "objective=" << format_number(s.objective) << '\n'
      << "iterations=" << s.solver.iterations << '\n'
      << "variables=" << s.solver.variables << '\n'
      << "constraints=" << s.solver.constraints << '\n'
      << "primal_residual=" << format_number(s.solver.primal_residual) << '\n'
      << "dual_residual=" << format_number(s.solver.dual_residual) << '\n'
      << "duality_gap=" << format_number(s.solver.gap) << '\n'
      << "feasibility_tol=" << format_number(s.solver.feasibility_tol) << '\n'
      << "optimality_tol=" << format_number(s.solver.optimality_tol) << '\n'
      << "max_mr=" << format_number(s.feasibility.max_mr) << '\n'
      << "mr_threshold=" << format_number(s.feasibility.threshold) << '\n'
      << "max_monotone_violation=" << format_number(s.feasibility.max_monotone_violation)
      << '\n';
}

} // namespace emt
