#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace emt {

enum class SigmaMode {
  /// One noise scale for the whole series, from estimate_sigma().
  global_mad,
  /// One noise scale supplied in TautConfig::sigma.
  fixed,
  /// Poisson-like noise: variance equal to the current fitted level
  /// (floored at 1), re-evaluated every squeeze round.
  poisson,
};

struct TautConfig {
  double tau = 2.5;
  int max_squeeze_rounds = 60;
  SigmaMode sigma_mode = SigmaMode::global_mad;
  double sigma = 0.0; // used with SigmaMode::fixed
};

enum class ExtremeKind { min, max };

std::string_view to_string(ExtremeKind kind);

/// A maximal constant run of a piecewise-constant function whose two
/// neighbouring runs are both higher (min) or both lower (max).
struct ExtremeInterval {
  ExtremeKind kind = ExtremeKind::min;
  std::size_t left = 0;
  std::size_t right = 0;
  double level = 0.0;
};

struct PiecewiseConstantFit {
  std::vector<double> levels;
  std::vector<std::size_t> knot_indices; // i with levels[i] != levels[i - 1]
  std::vector<ExtremeInterval> extremes; // interior local extremes, alternating
  std::vector<double> residuals;         // data - levels
  double sigma_hat = 0.0;
  std::vector<double> noise_variances;   // per index, as used by the final check
  double tau = 2.5;
  std::vector<double> tube_radii;        // n - 1 entries, knots 1..n-1
  int squeeze_rounds = 0;
  bool converged = true;
};

/// median |y[i+1] - y[i]| / (sqrt(2) * 0.6745).
double estimate_sigma(std::span<const double> counts);

/// Derivative of the taut string through the tube {|F(k) - R(k)| <= radius[k-1]}
/// around the cumulative sums R of `y`, pinned at F(0) = 0 and F(n) = R(n).
/// Equivalently the minimiser of 1/2 sum (y - f)^2 + sum radius[i] |f[i+1] - f[i]|.
std::vector<double> taut_string(std::span<const double> y, std::span<const double> radius);

/// Taut string with local squeezing: starts from a uniform tube wide enough
/// to give a constant fit and halves the radii around every dyadic interval
/// failing the multiresolution check until the residuals pass. When
/// max_squeeze_rounds is exhausted the last fit is returned with
/// converged = false.
PiecewiseConstantFit fit_taut_string(std::span<const double> counts, const TautConfig& config);

std::vector<std::size_t> knot_indices(std::span<const double> levels);
std::vector<ExtremeInterval> find_extremes(std::span<const double> levels);
/// Number of interior local extremes of a piecewise-constant sequence.
std::size_t modality(std::span<const double> levels);

/// Rebuilds knots, extremes and residuals for new levels.
PiecewiseConstantFit with_levels(const PiecewiseConstantFit& fit, std::vector<double> levels,
                                  std::span<const double> counts);

} // namespace emt
