#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace emt {

/// Independent Poisson draw per index with the fitted level as mean. Draw i
/// depends only on (seed, i).
std::vector<std::int64_t> simulate_poisson_from_fit(std::span<const double> levels,
                                                    std::uint64_t seed);

struct DispersionReport {
  double sd_residuals = 0.0;
  double sd_poisson = 0.0; // mean over simulations of SD(simulated - fit)
  double overdispersion_pct = 0.0;
  int n_sims = 0;
  std::uint64_t seed = 0;
};

/// Seed of simulation `replicate` inside overdispersion_ratio().
std::uint64_t replicate_seed(std::uint64_t seed, int replicate);

/// Compares the residual SD of `counts` about `levels` with the SD a Poisson
/// process driven by `levels` would produce.
DispersionReport overdispersion_ratio(std::span<const double> counts,
                                      std::span<const double> levels, int n_sims,
                                      std::uint64_t seed);

/// `sd_resid,sd_poisson,overdispersion_pct,n_sims,seed`.
void write_dispersion_csv(std::ostream& out, const DispersionReport& report);

struct Covariate {
  enum class Kind { sine, cosine, lag };
  Kind kind = Kind::sine;
  int order = 1;     // harmonic index j or lag
  std::size_t n = 0; // series length for harmonics

  /// Period 2n / j in samples for harmonics, the lag otherwise.
  double period_or_lag() const;
  std::string name() const;
};

/// Candidate covariates as centred, unit-norm columns.
struct CandidateSet {
  std::vector<Covariate> ids;
  Eigen::MatrixXd columns;
};

/// sin(pi j t / n) and cos(pi j t / n), t = 1..n, j = 1..n/2.
CandidateSet harmonic_candidates(std::size_t n);

/// Self-lags of a residual series aligned on the common support
/// t = max_lag .. n-1: the response is residuals[max_lag..] and lag l is
/// residuals[max_lag - l .. n - 1 - l].
struct LagDesign {
  std::vector<double> response;
  CandidateSet candidates;
};

LagDesign lag_candidates(std::span<const double> residuals, std::size_t max_lag);

struct SelectedCovariate {
  Covariate id;
  double p_value = 1.0;
  double coefficient = 0.0; // on the orthonormalised covariate
};

struct SelectionResult {
  std::vector<SelectedCovariate> selected; // in selection order
  double cutoff = 0.01;
  int steps = 0;
};

/// Greedy forward selection with Gaussian-covariate P-values. At step k
/// (k covariates chosen) a remaining candidate with squared correlation r^2
/// against the current residual gets P = min(1, q Pr(B >= r^2)),
/// B ~ Beta(1/2, (n - k - 1) / 2), q the number of remaining candidates.
/// The best candidate is taken while its P-value is at most `cutoff`.
SelectionResult gaussian_stepwise_select(std::span<const double> response,
                                         const CandidateSet& candidates, double cutoff);

/// `step,covariate,period_or_lag,p_value,coefficient`.
void write_selection_csv(std::ostream& out, const SelectionResult& result);

} // namespace emt
