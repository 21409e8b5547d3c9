#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace emt {

/// Closed index interval [left, right] of the dyadic family on 0..n-1:
/// every length 2^j <= n, at offsets that are multiples of max(1, 2^(j-1)).
struct IndexInterval {
  std::size_t left = 0;
  std::size_t right = 0;

  std::size_t length() const noexcept { return right - left + 1; }
};

std::vector<IndexInterval> dyadic_intervals(std::size_t n);

/// sqrt(tau * log n), the bound on a residual sum over I divided by its
/// standard deviation.
double multiresolution_threshold(std::size_t n, double tau);

struct Violation {
  IndexInterval interval;
  double sum = 0.0;   // residual sum over the interval
  double bound = 0.0; // largest admissible |sum|
};

/// Every dyadic interval with |sum r| / sqrt(|I|) > sigma sqrt(tau log n).
/// An empty result means the residuals pass the multiresolution check.
std::vector<Violation> multiresolution_violations(std::span<const double> residuals,
                                                  double sigma, double tau);

/// Heteroscedastic form: |sum r| > sqrt(tau log n) sqrt(sum of variances over I).
std::vector<Violation> multiresolution_violations(std::span<const double> residuals,
                                                  std::span<const double> variances,
                                                  double tau);

/// max over the family of |sum r| / sqrt(sum of variances); intervals with
/// zero variance are skipped.
double max_multiresolution_statistic(std::span<const double> residuals,
                                     std::span<const double> variances);

} // namespace emt
