#pragma once

#include "emt/tautstring.hpp"

#include <span>
#include <vector>

namespace emt {

enum class Direction { non_decreasing, non_increasing };

/// Least-squares monotone fit by pool-adjacent-violators. Adjacent blocks
/// with equal means are merged into the block on their left.
std::vector<double> isotonic_regression(std::span<const double> y, Direction direction);

/// Least-squares monotone fit of `segment` with its first and last values
/// held fixed; the interior is the isotonic fit clipped to the range spanned
/// by the two pinned ends.
std::vector<double> monotone_fit_pinned(std::span<const double> segment, Direction direction);

/// Replaces the levels strictly between each pair of consecutive extremes by
/// the least-squares monotone fit pinned to the two extreme levels. Extreme
/// intervals and the edge runs outside the first and last extreme keep
/// their taut-string levels, so the extreme structure is unchanged.
PiecewiseConstantFit isotone_refine(const PiecewiseConstantFit& fit,
                                    std::span<const double> counts);

} // namespace emt
