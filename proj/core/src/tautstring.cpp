#include "emt/tautstring.hpp"

#include "emt/error.hpp"
#include "emt/multiresolution.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace emt {

namespace {

struct Point {
  double x;
  double y;
};

double slope(const Point& a, const Point& b) { return (b.y - a.y) / (b.x - a.x); }

// Shortest path through a corridor given by upper and lower boundary points
// at x = 1..n (funnel algorithm). The upper chain is kept convex and the
// lower chain concave, both hanging from the apex.
class Funnel {
public:
  explicit Funnel(Point start) : apex_(start) { path_.push_back(start); }

  void add_upper(Point u) {
    while (!upper_.empty()) {
      const Point& prev = upper_.size() >= 2 ? upper_[upper_.size() - 2] : apex_;
      if (slope(prev, u) <= slope(prev, upper_.back()))
        upper_.pop_back();
      else
        break;
    }
    if (upper_.empty()) {
      while (!lower_.empty() && slope(apex_, u) < slope(apex_, lower_.front())) {
        apex_ = lower_.front();
        lower_.pop_front();
        path_.push_back(apex_);
      }
    }
    upper_.push_back(u);
  }

  void add_lower(Point l) {
    while (!lower_.empty()) {
      const Point& prev = lower_.size() >= 2 ? lower_[lower_.size() - 2] : apex_;
      if (slope(prev, l) >= slope(prev, lower_.back()))
        lower_.pop_back();
      else
        break;
    }
    if (lower_.empty()) {
      while (!upper_.empty() && slope(apex_, l) > slope(apex_, upper_.front())) {
        apex_ = upper_.front();
        upper_.pop_front();
        path_.push_back(apex_);
      }
    }
    lower_.push_back(l);
  }

  // Both chains end at the pinned end point once it has been added to each;
  // the lower chain then holds the rest of the path.
  std::vector<Point> finish() {
    path_.insert(path_.end(), lower_.begin(), lower_.end());
    return std::move(path_);
  }

private:
  Point apex_;
  std::deque<Point> upper_;
  std::deque<Point> lower_;
  std::vector<Point> path_;
};

} // namespace

std::string_view to_string(ExtremeKind kind) { return kind == ExtremeKind::min ? "min" : "max"; }

double estimate_sigma(std::span<const double> y) {
  if (y.size() < 3)
    throw Error(ErrorCode::TooShort, "sigma estimate needs at least 3 values");
  std::vector<double> d(y.size() - 1);
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    d[i] = std::fabs(y[i + 1] - y[i]);
  const std::size_t m = d.size();
  std::sort(d.begin(), d.end());
  const double med = m % 2 ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
  return med / (std::sqrt(2.0) * 0.6745);
}

std::vector<double> taut_string(std::span<const double> y, std::span<const double> radius) {
  const std::size_t n = y.size();
  if (n == 0)
    return {};
  if (radius.size() + 1 != n)
    throw Error(ErrorCode::LengthMismatch, "taut string needs n - 1 tube radii");
  Funnel funnel({0.0, 0.0});
  double cum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    cum += y[k - 1];
    const double w = k < n ? radius[k - 1] : 0.0;
    if (!(w >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "tube radii must be non-negative");
    const double x = static_cast<double>(k);
    funnel.add_upper({x, cum + w});
    funnel.add_lower({x, cum - w});
  }
  const std::vector<Point> path = funnel.finish();
  std::vector<double> f(n);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) {
    const double level = slope(path[s], path[s + 1]);
    const auto from = static_cast<std::size_t>(path[s].x);
    const auto to = static_cast<std::size_t>(path[s + 1].x);
    std::fill(f.begin() + static_cast<std::ptrdiff_t>(from),
              f.begin() + static_cast<std::ptrdiff_t>(to), level);
  }
  return f;
}

std::vector<std::size_t> knot_indices(std::span<const double> levels) {
  std::vector<std::size_t> k;
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] != levels[i - 1])
      k.push_back(i);
  return k;
}

std::vector<ExtremeInterval> find_extremes(std::span<const double> levels) {
  struct Run {
    std::size_t left, right;
    double level;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (runs.empty() || levels[i] != runs.back().level)
      runs.push_back({i, i, levels[i]});
    else
      runs.back().right = i;
  }
  std::vector<ExtremeInterval> out;
  for (std::size_t j = 1; j + 1 < runs.size(); ++j) {
    const double prev = runs[j - 1].level, cur = runs[j].level, next = runs[j + 1].level;
    if (cur < prev && cur < next)
      out.push_back({ExtremeKind::min, runs[j].left, runs[j].right, cur});
    else if (cur > prev && cur > next)
      out.push_back({ExtremeKind::max, runs[j].left, runs[j].right, cur});
  }
  return out;
}

std::size_t modality(std::span<const double> levels) { return find_extremes(levels).size(); }

PiecewiseConstantFit with_levels(const PiecewiseConstantFit& fit, std::vector<double> levels,
                                  std::span<const double> counts) {
  if (levels.size() != counts.size())
    throw Error(ErrorCode::LengthMismatch, "levels and counts differ in length");
  PiecewiseConstantFit out = fit;
  out.levels = std::move(levels);
  out.knot_indices = knot_indices(out.levels);
  out.extremes = find_extremes(out.levels);
  out.residuals.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.residuals[i] = counts[i] - out.levels[i];
  return out;
}

PiecewiseConstantFit fit_taut_string(std::span<const double> y, const TautConfig& config) {
  const std::size_t n = y.size();
  if (n < 4)
    throw Error(ErrorCode::TooShort, "taut string needs at least 4 values");
  if (!(config.tau > 0.0) || config.max_squeeze_rounds < 1)
    throw Error(ErrorCode::InvalidArgument, "need tau > 0 and max_squeeze_rounds >= 1");

  PiecewiseConstantFit fit;
  fit.tau = config.tau;
  switch (config.sigma_mode) {
  case SigmaMode::global_mad: fit.sigma_hat = estimate_sigma(y); break;
  case SigmaMode::fixed:
    if (!(config.sigma >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "fixed sigma must be non-negative");
    fit.sigma_hat = config.sigma;
    break;
  case SigmaMode::poisson: fit.sigma_hat = 0.0; break;
  }

  // Wide enough that the taut string is the straight line to R(n).
  double mean = 0.0;
  for (double v : y)
    mean += v;
  mean /= static_cast<double>(n);
  double width = 0.0, cum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    cum += y[k - 1];
    width = std::max(width, std::fabs(cum - mean * static_cast<double>(k)));
  }
  const bool exact = config.sigma_mode != SigmaMode::poisson && fit.sigma_hat == 0.0;
  fit.tube_radii.assign(n - 1, exact ? 0.0 : 1.01 * width + 1.0);

  std::vector<char> squeeze(n - 1);
  for (int round = 0;; ++round) {
    fit = with_levels(fit, taut_string(y, fit.tube_radii), y);
    if (config.sigma_mode == SigmaMode::poisson) {
      fit.noise_variances.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        fit.noise_variances[i] = std::max(fit.levels[i], 1.0);
      double s2 = 0.0;
      for (double v : fit.noise_variances)
        s2 += v;
      fit.sigma_hat = std::sqrt(s2 / static_cast<double>(n));
    } else {
      fit.noise_variances.assign(n, fit.sigma_hat * fit.sigma_hat);
    }
    fit.squeeze_rounds = round;
    const auto violations = multiresolution_violations(fit.residuals, fit.noise_variances, fit.tau);
    if (violations.empty()) {
      fit.converged = true;
      break;
    }
    if (round >= config.max_squeeze_rounds) {
      fit.converged = false;
      break;
    }
    std::fill(squeeze.begin(), squeeze.end(), 0);
    for (const Violation& v : violations) {
      // knots a .. b + 1 bound the data interval [a, b]; knot k is entry k - 1
      const std::size_t first = std::max<std::size_t>(v.interval.left, 1);
      const std::size_t last = std::min(v.interval.right + 1, n - 1);
      for (std::size_t k = first; k <= last; ++k)
        squeeze[k - 1] = 1;
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (squeeze[k])
        fit.tube_radii[k] *= 0.5;
  }
  return fit;
}

} // namespace emt
