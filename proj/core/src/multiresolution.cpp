#include "emt/multiresolution.hpp"

#include "emt/error.hpp"

#include <algorithm>
#include <cmath>

namespace emt {

namespace {

std::vector<double> prefix_sums(std::span<const double> v) {
  std::vector<double> p(v.size() + 1, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    p[i + 1] = p[i] + v[i];
  return p;
}

} // namespace

std::vector<IndexInterval> dyadic_intervals(std::size_t n) {
  std::vector<IndexInterval> out;
  for (std::size_t len = 1; len <= n; len *= 2) {
    const std::size_t step = std::max<std::size_t>(1, len / 2);
    for (std::size_t left = 0; left + len <= n; left += step)
      out.push_back({left, left + len - 1});
  }
  return out;
}

double multiresolution_threshold(std::size_t n, double tau) {
  if (!(tau > 0.0))
    throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  return std::sqrt(tau * std::log(static_cast<double>(std::max<std::size_t>(n, 2))));
}

std::vector<Violation> multiresolution_violations(std::span<const double> residuals,
                                                  double sigma, double tau) {
  if (!(sigma >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "sigma must be non-negative");
  const std::vector<double> variances(residuals.size(), sigma * sigma);
  return multiresolution_violations(residuals, variances, tau);
}

std::vector<Violation> multiresolution_violations(std::span<const double> residuals,
                                                  std::span<const double> variances,
                                                  double tau) {
  if (variances.size() != residuals.size())
    throw Error(ErrorCode::LengthMismatch, "residuals and variances differ in length");
  const std::size_t n = residuals.size();
  const double thr = multiresolution_threshold(n, tau);
  const auto r = prefix_sums(residuals);
  const auto v = prefix_sums(variances);
  std::vector<Violation> out;
  for (const IndexInterval& I : dyadic_intervals(n)) {
    const double sum = r[I.right + 1] - r[I.left];
    const double bound = thr * std::sqrt(std::max(0.0, v[I.right + 1] - v[I.left]));
    if (std::fabs(sum) > bound)
      out.push_back({I, sum, bound});
  }
  return out;
}

double max_multiresolution_statistic(std::span<const double> residuals,
                                     std::span<const double> variances) {
  if (variances.size() != residuals.size())
    throw Error(ErrorCode::LengthMismatch, "residuals and variances differ in length");
  const auto r = prefix_sums(residuals);
  const auto v = prefix_sums(variances);
  double best = 0.0;
  for (const IndexInterval& I : dyadic_intervals(residuals.size())) {
    const double var = v[I.right + 1] - v[I.left];
    if (var > 0.0)
      best = std::max(best, std::fabs(r[I.right + 1] - r[I.left]) / std::sqrt(var));
  }
  return best;
}

} // namespace emt
