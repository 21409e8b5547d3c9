#include "emt/isotone.hpp"

#include "emt/error.hpp"

#include <algorithm>

namespace emt {

std::vector<double> isotonic_regression(std::span<const double> y, Direction direction) {
  struct Block {
    double sum;
    std::size_t count;
    double mean() const { return sum / static_cast<double>(count); }
  };
  const double sign = direction == Direction::non_decreasing ? 1.0 : -1.0;
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    blocks.push_back({sign * v, 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].mean() >= blocks.back().mean()) {
      const Block b = blocks.back();
      blocks.pop_back();
      blocks.back().sum += b.sum;
      blocks.back().count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks)
    out.insert(out.end(), b.count, sign * b.mean());
  return out;
}

std::vector<double> monotone_fit_pinned(std::span<const double> segment, Direction direction) {
  if (segment.size() <= 2)
    return {segment.begin(), segment.end()};
  const double first = segment.front(), last = segment.back();
  const bool up = direction == Direction::non_decreasing;
  if (up ? first > last : first < last)
    throw Error(ErrorCode::InvalidArgument, "pinned end values contradict the direction");
  const double lo = std::min(first, last), hi = std::max(first, last);
  std::vector<double> out(segment.begin(), segment.end());
  const auto inner = isotonic_regression(segment.subspan(1, segment.size() - 2), direction);
  for (std::size_t i = 0; i < inner.size(); ++i)
    out[i + 1] = std::clamp(inner[i], lo, hi);
  return out;
}

PiecewiseConstantFit isotone_refine(const PiecewiseConstantFit& fit,
                                    std::span<const double> counts) {
  if (counts.size() != fit.levels.size())
    throw Error(ErrorCode::LengthMismatch, "fit and counts differ in length");
  std::vector<double> levels = fit.levels;
  const auto& ex = fit.extremes;
  for (std::size_t k = 0; k + 1 < ex.size(); ++k) {
    if (ex[k].kind == ex[k + 1].kind)
      throw Error(ErrorCode::InvalidArgument, "extremes do not alternate");
    const std::size_t from = ex[k].right + 1, to = ex[k + 1].left; // interior [from, to)
    if (from >= to)
      continue;
    std::vector<double> segment;
    segment.reserve(to - from + 2);
    segment.push_back(ex[k].level);
    segment.insert(segment.end(), counts.begin() + static_cast<std::ptrdiff_t>(from),
                   counts.begin() + static_cast<std::ptrdiff_t>(to));
    segment.push_back(ex[k + 1].level);
    const auto fitted = monotone_fit_pinned(segment, ex[k].kind == ExtremeKind::min
                                                         ? Direction::non_decreasing
                                                         : Direction::non_increasing);
    std::copy(fitted.begin() + 1, fitted.end() - 1,
              levels.begin() + static_cast<std::ptrdiff_t>(from));
  }
  // Interior values clipped to a pinned level merge into that extreme's run.
  return with_levels(fit, std::move(levels), counts);
}

} // namespace emt
