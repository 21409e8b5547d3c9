#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

TEST_CASE("simplex oracle solves a textbook LP") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  x=2, y=6, 36
  oracle::DenseLp lp;
  lp.c = {-3, -5};
  lp.A_le = {{1, 0}, {0, 2}, {3, 2}};
  lp.b_le = {4, 12, 18};
  auto r = oracle::simplex(lp);
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(-36));
  CHECK(r.x[0] == doctest::Approx(2));
  CHECK(r.x[1] == doctest::Approx(6));
}

TEST_CASE("simplex oracle handles equalities, negative rhs and free variables") {
  // min |x - 3| written as t >= x - 3, t >= 3 - x with x free; x + y = 1
  oracle::DenseLp lp;
  lp.c = {0, 0, 1};
  lp.A_le = {{1, 0, -1}, {-1, 0, -1}};
  lp.b_le = {3, -3};
  lp.A_eq = {{1, 1, 0}};
  lp.b_eq = {1};
  auto r = oracle::simplex_free(lp);
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(0).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(3));
  CHECK(r.x[1] == doctest::Approx(-2));

  oracle::DenseLp bad;
  bad.c = {0};
  bad.A_le = {{1}, {-1}};
  bad.b_le = {1, -2};
  CHECK_FALSE(oracle::simplex_free(bad).feasible);
}

TEST_CASE("enumeration isotone oracle") {
  std::vector<double> y{1, 3, 2, 4};
  auto f = oracle::isotone_by_enumeration(y, true);
  CHECK(f[1] == doctest::Approx(2.5));
  CHECK(f[2] == doctest::Approx(2.5));
  std::vector<double> seg{1, 5, 0, 3};
  auto g = oracle::pinned_by_enumeration(seg, true);
  CHECK(g[0] == 1);
  CHECK(g[1] == doctest::Approx(2.5));
  CHECK(g[2] == doctest::Approx(2.5));
  CHECK(g[3] == 3);
}

TEST_CASE("calendar oracle on known ISO weeks") {
  auto w = oracle::iso_week(2015, 12, 31);
  CHECK(w.year == 2015);
  CHECK(w.week == 53);
  w = oracle::iso_week(2016, 1, 3);
  CHECK(w.year == 2015);
  CHECK(w.week == 53);
  w = oracle::iso_week(2019, 12, 30);
  CHECK(w.year == 2020);
  CHECK(w.week == 1);
  CHECK(oracle::day_of_week(2020, 3, 9) == 0);
  CHECK(oracle::day_of_week(2009, 1, 1) == 3);
}

TEST_CASE("poisson tail oracle") {
  CHECK(static_cast<double>(oracle::poisson_upper_tail(1, 2.0L)) ==
        doctest::Approx(1 - std::exp(-2.0)));
  CHECK(static_cast<double>(oracle::poisson_upper_tail(0, 5.0L)) == 1.0);
}

TEST_CASE("minimal modality oracle") {
  std::vector<double> ramp{1, 2, 3, 4, 5, 6};
  std::vector<double> zero(5, 0.0);
  CHECK(oracle::min_modality_in_tube(ramp, zero) == 0);
  std::vector<double> bump{0, 0, 9, 9, 0, 0};
  CHECK(oracle::min_modality_in_tube(bump, zero) == 1);
  CHECK(oracle::min_modality_multiresolution(bump, 0.01, 2.5) == 1);
  CHECK(oracle::min_modality_multiresolution(bump, 100.0, 2.5) == 0);
}
