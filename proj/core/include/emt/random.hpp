#pragma once

#include <cstdint>

namespace emt {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based random stream keyed by (seed, stream). Every draw is a pure
/// function of the key and a draw counter, so replicate r of a Monte-Carlo
/// run gives the same numbers whatever order or thread it runs on.
/// All samplers are implemented here rather than taken from <random>, whose
/// distributions are not specified bit-for-bit across standard libraries.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  /// Poisson variate; inversion below mean 10, Hormann's PTRS above.
  std::int64_t poisson(double mean);
  /// Gamma(shape, scale) by Marsaglia-Tsang.
  double gamma(double shape, double scale);

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

} // namespace emt
