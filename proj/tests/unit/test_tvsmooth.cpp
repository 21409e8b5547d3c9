#include "emt/error.hpp"
#include "emt/multiresolution.hpp"
#include "emt/random.hpp"
#include "emt/tvsmooth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

using namespace emt;

namespace {

std::vector<double> bump(std::size_t n, std::uint64_t seed, double height = 120) {
  CounterRng rng(seed, 31);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    y[i] = static_cast<double>(rng.poisson(100 + height * std::exp(-std::pow((t - 0.5) / 0.12, 2))));
  }
  return y;
}

// Pair directions from the extreme midpoints, written out independently.
std::vector<int> pattern_of(const PiecewiseConstantFit& fit) {
  const std::size_t n = fit.levels.size();
  std::vector<int> inc(n - 1, 1);
  if (fit.extremes.empty()) {
    const int up = fit.levels.back() >= fit.levels.front();
    std::fill(inc.begin(), inc.end(), up);
    return inc;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    int dir = fit.extremes[0].kind == ExtremeKind::max; // before the first extreme
    for (const auto& e : fit.extremes)
      if ((e.left + e.right) / 2 <= i)
        dir = e.kind == ExtremeKind::min;
    inc[i] = dir;
  }
  return inc;
}

} // namespace

TEST_CASE("discrete derivatives") {
  std::vector<double> a{0, 1, 2, 3}, b{0, 1, 4, 9};
  CHECK(discrete_derivative(a, 1) == std::vector<double>{1, 1, 1});
  CHECK(discrete_derivative(b, 2) == std::vector<double>{2, 2});
  CHECK(discrete_derivative(a, 0) == a);
  CHECK_THROWS_AS(discrete_derivative(a, 4), Error);
  CounterRng rng(1, 1);
  std::vector<double> r(30);
  for (double& v : r)
    v = rng.normal();
  std::vector<double> rep(r);
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < rep.size(); ++i)
      next.push_back(rep[i + 1] - rep[i]);
    rep = next;
    const auto d = discrete_derivative(r, k);
    REQUIRE(d.size() == rep.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      CHECK(d[i] == doctest::Approx(rep[i]).epsilon(1e-12));
  }
}

// Any line inside the multiresolution bounds is optimal, so only the shape is checked.
TEST_CASE("a straight line gives a linear fit with zero objective") {
  std::vector<double> line(60);
  for (std::size_t i = 0; i < line.size(); ++i)
    line[i] = 50 + 2.0 * static_cast<double>(i);
  TautConfig c;
  c.sigma_mode = SigmaMode::fixed;
  c.sigma = 3.0;
  const auto fit = fit_taut_string(line, c);
  const SmoothFit s = tv_smooth(line, fit, 1);
  CHECK(s.objective < 1e-6);
  for (double d : discrete_derivative(s.values, 2))
    CHECK(std::fabs(d) < 1e-6);
  CHECK(s.feasibility.feasible);
}

TEST_CASE("monotone pattern") {
  PiecewiseConstantFit fit;
  std::vector<double> counts{5, 4, 3, 3, 6, 6, 6, 2};
  fit = with_levels(fit, counts, counts);
  const auto dir = monotone_pattern(fit);
  const auto expect = pattern_of(fit);
  REQUIRE(dir.size() == expect.size());
  for (std::size_t i = 0; i < dir.size(); ++i)
    CHECK((dir[i] == Direction::non_decreasing) == (expect[i] == 1));
  CHECK(dir[0] == Direction::non_increasing);
  CHECK(dir[3] == Direction::non_decreasing);
  CHECK(dir[6] == Direction::non_increasing);
}

TEST_CASE("small instances match the dense LP oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    for (int order : {1, 2}) {
      const auto y = bump(40, seed);
      TautConfig c;
      c.sigma_mode = SigmaMode::fixed;
      c.sigma = 10.0;
      const auto fit = fit_taut_string(y, c);
      REQUIRE(fit.converged);
      const SmoothFit s = tv_smooth(y, fit, order);
      const double thr = multiresolution_threshold(y.size(), fit.tau);
      const auto pat = pattern_of(fit);
      const double best = oracle::tv_smooth_objective(y, fit.noise_variances, thr, pat, order);
      CAPTURE(seed);
      CAPTURE(order);
      CHECK(s.objective == doctest::Approx(best).epsilon(1e-4).scale(1.0));
      CHECK(s.feasibility.feasible);
      CHECK(s.feasibility.max_mr <= s.feasibility.threshold + 1e-6);
    }
  }
}

TEST_CASE("bad inputs") {
  const auto y = bump(40, 9);
  const auto fit = fit_taut_string(y, {});
  CHECK_THROWS_AS(tv_smooth(y, fit, 3), Error);
  auto broken = fit;
  broken.levels.assign(y.size(), 0.0);
  broken.noise_variances.assign(y.size(), 1.0);
  try {
    tv_smooth(y, broken, 1);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("zero noise returns the data") {
  std::vector<double> y{3, 1, 4, 1, 5, 9, 2, 6};
  TautConfig c;
  c.sigma_mode = SigmaMode::fixed;
  c.sigma = 0;
  const auto fit = fit_taut_string(y, c);
  const SmoothFit s = tv_smooth(y, fit, 2);
  CHECK(s.values == y);
}

TEST_CASE("n = 500 solves well within a minute and passes the feasibility check") {
  const auto y = bump(500, 12, 200);
  TautConfig c;
  c.sigma_mode = SigmaMode::poisson;
  const auto fit = fit_taut_string(y, c);
  for (int order : {1, 2}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SmoothFit s = tv_smooth(y, fit, order);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("order " << order << ": " << secs << " s, " << s.solver.iterations << " iterations");
    CHECK(secs < 60);
    CHECK(s.feasibility.feasible);
    double tv_taut = 0;
    for (double d : discrete_derivative(fit.levels, order + 1))
      tv_taut += std::fabs(d);
    CHECK(s.objective <= tv_taut + 1e-6);
    std::ostringstream csv, meta;
    write_smooth_csv(csv, s, y);
    write_solver_meta(meta, s);
    CHECK(csv.str().rfind("index,count,smooth_value,residual\n", 0) == 0);
    CHECK(meta.str().find("method=mehrotra") != std::string::npos);
  }
}
