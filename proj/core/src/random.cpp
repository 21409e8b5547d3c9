#include "emt/random.hpp"

#include "emt/error.hpp"

#include <cmath>
#include <numbers>

namespace emt {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(seed ^ mix64(stream ^ 0xD1B54A32D192ED03ull))) {}

std::uint64_t CounterRng::next_u64() noexcept {
  return mix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_);
}

double CounterRng::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t CounterRng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw Error(ErrorCode::NegativeLevel, "Poisson mean must be finite and non-negative");
  if (mean == 0.0)
    return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    double prod = uniform();
    std::int64_t k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }
  // Transformed rejection with squeeze (Hormann 1993).
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr)
      return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us))
      continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::int64_t>(k);
  }
}

double CounterRng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw Error(ErrorCode::InvalidArgument, "gamma shape and scale must be positive");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0, scale);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0, v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x)
      return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

} // namespace emt
