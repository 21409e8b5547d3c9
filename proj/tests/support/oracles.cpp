#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

struct Tableau {
  std::vector<std::vector<double>> t; // m rows, ncols + 1 (rhs last)
  std::vector<std::size_t> basis;
  std::size_t ncols = 0;
};

void pivot(Tableau& tb, std::size_t r, std::size_t c) {
  auto& pr = tb.t[r];
  const double p = pr[c];
  for (double& v : pr)
    v /= p;
  for (std::size_t i = 0; i < tb.t.size(); ++i) {
    if (i == r)
      continue;
    const double f = tb.t[i][c];
    if (f == 0.0)
      continue;
    for (std::size_t j = 0; j <= tb.ncols; ++j)
      tb.t[i][j] -= f * pr[j];
  }
  tb.basis[r] = c;
}

// Returns false when unbounded.
bool optimise(Tableau& tb, const std::vector<double>& cost, std::size_t allowed, double tol) {
  const std::size_t m = tb.t.size();
  for (int iter = 0; iter < 200000; ++iter) {
    std::size_t enter = allowed;
    for (std::size_t j = 0; j < allowed; ++j) {
      double r = cost[j];
      for (std::size_t i = 0; i < m; ++i)
        r -= cost[tb.basis[i]] * tb.t[i][j];
      if (r < -tol) {
        enter = j;
        break;
      }
    }
    if (enter == allowed)
      return true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
      if (tb.t[i][enter] > tol)
        best = std::min(best, tb.t[i][tb.ncols] / tb.t[i][enter]);
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = tb.t[i][enter];
      if (a > tol && tb.t[i][tb.ncols] / a <= best + 1e-12 &&
          (leave == m || tb.basis[i] < tb.basis[leave]))
        leave = i;
    }
    if (leave == m)
      return false;
    pivot(tb, leave, enter);
  }
  throw std::runtime_error("simplex oracle: iteration limit");
}

} // namespace

DenseLpResult simplex(const DenseLp& lp, double tol) {
  const std::size_t n = lp.c.size();
  const std::size_t mle = lp.A_le.size();
  const std::size_t meq = lp.A_eq.size();
  const std::size_t m = mle + meq;
  // columns: x (n), slacks (mle), artificials (m)
  Tableau tb;
  tb.ncols = n + mle + m;
  tb.t.assign(m, std::vector<double>(tb.ncols + 1, 0.0));
  tb.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool le = i < mle;
    const auto& a = le ? lp.A_le[i] : lp.A_eq[i - mle];
    double b = le ? lp.b_le[i] : lp.b_eq[i - mle];
    const double sign = b < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j)
      tb.t[i][j] = sign * a[j];
    if (le)
      tb.t[i][n + i] = sign;
    tb.t[i][n + mle + i] = 1.0;
    tb.t[i][tb.ncols] = sign * b;
    tb.basis[i] = n + mle + i;
  }
  std::vector<double> phase1(tb.ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    phase1[n + mle + i] = 1.0;
  optimise(tb, phase1, tb.ncols, tol);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tb.basis[i] >= n + mle)
      infeas += tb.t[i][tb.ncols];
  DenseLpResult res;
  if (infeas > 1e-7)
    return res;
  res.feasible = true;
  // Drive remaining artificials out of the basis, dropping redundant rows.
  for (std::size_t i = 0; i < tb.t.size();) {
    if (tb.basis[i] < n + mle) {
      ++i;
      continue;
    }
    std::size_t col = n + mle;
    for (std::size_t j = 0; j < n + mle; ++j)
      if (std::fabs(tb.t[i][j]) > 1e-9) {
        col = j;
        break;
      }
    if (col < n + mle) {
      pivot(tb, i, col);
      ++i;
    } else {
      tb.t.erase(tb.t.begin() + static_cast<std::ptrdiff_t>(i));
      tb.basis.erase(tb.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  std::vector<double> cost(tb.ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    cost[j] = lp.c[j];
  res.bounded = optimise(tb, cost, n + mle, tol);
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < tb.t.size(); ++i)
    if (tb.basis[i] < n)
      res.x[tb.basis[i]] = tb.t[i][tb.ncols];
  for (std::size_t j = 0; j < n; ++j)
    res.objective += lp.c[j] * res.x[j];
  return res;
}

DenseLpResult simplex_free(const DenseLp& lp, double tol) {
  const std::size_t n = lp.c.size();
  auto split = [n](const std::vector<double>& row) {
    std::vector<double> out(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      out[j] = row[j];
      out[n + j] = -row[j];
    }
    return out;
  };
  DenseLp s;
  s.c = split(lp.c);
  for (const auto& r : lp.A_le)
    s.A_le.push_back(split(r));
  for (const auto& r : lp.A_eq)
    s.A_eq.push_back(split(r));
  s.b_le = lp.b_le;
  s.b_eq = lp.b_eq;
  DenseLpResult r = simplex(s, tol);
  if (!r.x.empty()) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j)
      x[j] = r.x[j] - r.x[n + j];
    r.x = x;
  }
  return r;
}

namespace {

double sq_error(std::span<const double> y, const std::vector<double>& f) {
  double e = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    e += (y[i] - f[i]) * (y[i] - f[i]);
  return e;
}

// Each mask bit i set means a block boundary between i and i+1.
std::vector<double> best_partition(std::span<const double> y, bool increasing, double lo,
                                   double hi) {
  const std::size_t n = y.size();
  std::vector<double> best;
  double best_err = std::numeric_limits<double>::infinity();
  const std::uint64_t masks = n == 0 ? 1 : (std::uint64_t{1} << (n - 1));
  for (std::uint64_t mask = 0; mask < masks; ++mask) {
    std::vector<double> f(n);
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == n || ((mask >> i) & 1u)) {
        double s = 0.0;
        for (std::size_t k = start; k <= i; ++k)
          s += y[k];
        const double v = std::clamp(s / static_cast<double>(i - start + 1), lo, hi);
        for (std::size_t k = start; k <= i; ++k)
          f[k] = v;
        start = i + 1;
      }
    }
    bool ok = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (increasing ? f[i + 1] < f[i] - 1e-15 : f[i + 1] > f[i] + 1e-15)
        ok = false;
    if (!ok)
      continue;
    const double e = sq_error(y, f);
    if (e < best_err) {
      best_err = e;
      best = f;
    }
  }
  return best;
}

} // namespace

std::vector<double> isotone_by_enumeration(std::span<const double> y, bool increasing) {
  const double inf = std::numeric_limits<double>::infinity();
  return best_partition(y, increasing, -inf, inf);
}

std::vector<double> pinned_by_enumeration(std::span<const double> segment, bool increasing) {
  std::vector<double> out(segment.begin(), segment.end());
  if (segment.size() <= 2)
    return out;
  const double a = segment.front();
  const double b = segment.back();
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const auto interior = best_partition(segment.subspan(1, segment.size() - 2), increasing, lo, hi);
  std::copy(interior.begin(), interior.end(), out.begin() + 1);
  return out;
}

namespace {

// Rows (A, b) of A f <= b that do not depend on the monotone pattern.
using Rows = std::vector<std::pair<std::vector<double>, double>>;

int min_modality(std::size_t n, const Rows& base, const DenseLp& eq) {
  const std::size_t turns = n >= 2 ? n - 2 : 0; // candidate turning indices 1..n-2
  for (int m = 0; m <= static_cast<int>(turns); ++m) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << turns); ++mask) {
      if (std::popcount(mask) != m)
        continue;
      for (int first_up = 0; first_up < 2; ++first_up) {
        DenseLp lp = eq;
        lp.c.assign(n, 0.0);
        for (const auto& [row, b] : base) {
          lp.A_le.push_back(row);
          lp.b_le.push_back(b);
        }
        bool up = first_up == 1;
        for (std::size_t i = 0; i + 1 < n; ++i) {
          if (i >= 1 && ((mask >> (i - 1)) & 1u))
            up = !up;
          std::vector<double> row(n, 0.0);
          row[i] = up ? 1.0 : -1.0;
          row[i + 1] = up ? -1.0 : 1.0;
          lp.A_le.push_back(row);
          lp.b_le.push_back(0.0);
        }
        if (simplex_free(lp).feasible)
          return m;
      }
    }
  }
  return static_cast<int>(turns);
}

} // namespace

int min_modality_in_tube(std::span<const double> y, std::span<const double> radius) {
  const std::size_t n = y.size();
  std::vector<double> R(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    R[i + 1] = R[i] + y[i];
  Rows rows;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      row[i] = 1.0;
    rows.emplace_back(row, R[k] + radius[k - 1]);
    for (double& v : row)
      v = -v;
    rows.emplace_back(row, -(R[k] - radius[k - 1]));
  }
  DenseLp eq;
  eq.A_eq.push_back(std::vector<double>(n, 1.0));
  eq.b_eq.push_back(R[n]);
  return min_modality(n, rows, eq);
}

int min_modality_multiresolution(std::span<const double> y, double sigma, double tau) {
  const std::size_t n = y.size();
  const double thr = sigma * std::sqrt(tau * std::log(static_cast<double>(n)));
  Rows rows;
  for (std::size_t len = 1; len <= n; len *= 2) {
    const std::size_t stride = std::max<std::size_t>(1, len / 2);
    for (std::size_t a = 0; a + len <= n; a += stride) {
      std::vector<double> row(n, 0.0);
      double sy = 0.0;
      for (std::size_t i = a; i < a + len; ++i) {
        row[i] = 1.0;
        sy += y[i];
      }
      const double B = thr * std::sqrt(static_cast<double>(len));
      rows.emplace_back(row, B + sy); // sum f <= B + sum y
      for (double& v : row)
        v = -v;
      rows.emplace_back(row, B - sy);
    }
  }
  return min_modality(n, rows, DenseLp{});
}

double taut_string_kkt_violation(std::span<const double> y, std::span<const double> radius,
                                 std::span<const double> f) {
  const std::size_t n = y.size();
  double worst = 0.0;
  double F = 0.0;
  double R = 0.0;
  double scale = 1.0;
  for (double v : y)
    scale = std::max(scale, std::fabs(v));
  for (std::size_t k = 1; k <= n; ++k) {
    F += f[k - 1];
    R += y[k - 1];
    const double d = F - R;
    if (k == n) {
      worst = std::max(worst, std::fabs(d));
      break;
    }
    const double r = radius[k - 1];
    worst = std::max(worst, std::fabs(d) - r);
    const double jump = f[k] - f[k - 1];
    if (jump > 1e-9 * scale)
      worst = std::max(worst, std::fabs(d - r));
    else if (jump < -1e-9 * scale)
      worst = std::max(worst, std::fabs(d + r));
  }
  return worst;
}

double tv_smooth_objective(std::span<const double> y, std::span<const double> variances,
                           double threshold, std::span<const int> increasing_pairs, int order) {
  const std::size_t n = y.size();
  const std::size_t dk = static_cast<std::size_t>(order) + 1;
  const std::size_t nt = n - dk;
  // difference stencil of order dk
  std::vector<double> st{1.0};
  for (std::size_t s = 0; s < dk; ++s) {
    std::vector<double> nx(st.size() + 1, 0.0);
    for (std::size_t i = 0; i < st.size(); ++i) {
      nx[i] -= st[i];
      nx[i + 1] += st[i];
    }
    st = nx;
  }
  // f = g + l with l_i the lower bound from the single-point interval.
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i)
    l[i] = y[i] - threshold * std::sqrt(variances[i]);

  DenseLp lp;
  const std::size_t nv = n + nt;
  lp.c.assign(nv, 0.0);
  for (std::size_t j = 0; j < nt; ++j)
    lp.c[n + j] = 1.0;
  for (std::size_t len = 1; len <= n; len *= 2) {
    const std::size_t stride = std::max<std::size_t>(1, len / 2);
    for (std::size_t a = 0; a + len <= n; a += stride) {
      double sy = 0.0, sl = 0.0, sv = 0.0;
      std::vector<double> row(nv, 0.0);
      for (std::size_t i = a; i < a + len; ++i) {
        sy += y[i];
        sl += l[i];
        sv += variances[i];
        row[i] = 1.0;
      }
      const double B = threshold * std::sqrt(sv);
      lp.A_le.push_back(row);
      lp.b_le.push_back(B + sy - sl);
      for (double& v : row)
        v = -v;
      lp.A_le.push_back(row);
      lp.b_le.push_back(B - sy + sl);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<double> row(nv, 0.0);
    const double s = increasing_pairs[i] ? 1.0 : -1.0; // s (f_i - f_{i+1}) <= 0
    row[i] = s;
    row[i + 1] = -s;
    lp.A_le.push_back(row);
    lp.b_le.push_back(-s * (l[i] - l[i + 1]));
  }
  for (std::size_t j = 0; j < nt; ++j) {
    double dl = 0.0;
    for (std::size_t i = 0; i <= dk; ++i)
      dl += st[i] * l[j + i];
    for (double sign : {1.0, -1.0}) {
      std::vector<double> row(nv, 0.0);
      for (std::size_t i = 0; i <= dk; ++i)
        row[j + i] = sign * st[i];
      row[n + j] = -1.0;
      lp.A_le.push_back(row);
      lp.b_le.push_back(-sign * dl);
    }
  }
  const DenseLpResult r = simplex(lp);
  if (!r.feasible || !r.bounded)
    throw std::runtime_error("tv oracle: infeasible or unbounded");
  return r.objective;
}

long double poisson_upper_tail(std::int64_t x, long double lambda) {
  if (x <= 0)
    return 1.0L;
  auto pmf = [lambda](std::int64_t k) {
    return std::exp(static_cast<long double>(k) * std::log(lambda) - lambda -
                    std::lgamma(static_cast<long double>(k) + 1.0L));
  };
  if (static_cast<long double>(x) > lambda) {
    long double s = 0.0L;
    for (std::int64_t k = x;; ++k) {
      const long double p = pmf(k);
      s += p;
      if (p < s * 1e-22L && static_cast<long double>(k) > lambda)
        break;
    }
    return s;
  }
  long double s = 0.0L;
  for (std::int64_t k = 0; k < x; ++k)
    s += pmf(k);
  return 1.0L - s;
}

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

long day_number(int y, int m, int d) {
  static const int cum[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
  long yy = y - 1;
  long n = 365 * yy + yy / 4 - yy / 100 + yy / 400;
  n += cum[m - 1] + d;
  if (m > 2 && leap(y))
    n += 1;
  return n; // 0001-01-01 -> 1, a Monday
}

} // namespace

int day_of_week(int y, int m, int d) { return static_cast<int>((day_number(y, m, d) - 1) % 7); }

YearWeek iso_week(int y, int m, int d) {
  const long n = day_number(y, m, d);
  const long thursday = n - day_of_week(y, m, d) + 3;
  int ty = y;
  if (thursday < day_number(y, 1, 1))
    ty = y - 1;
  else if (thursday >= day_number(y + 1, 1, 1))
    ty = y + 1;
  return {ty, static_cast<int>((thursday - day_number(ty, 1, 1)) / 7 + 1)};
}

double lower_quantile(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double need = q * static_cast<double>(x.size());
  for (double v : x) {
    const auto count = std::count_if(x.begin(), x.end(), [v](double u) { return u <= v; });
    if (static_cast<double>(count) >= need)
      return v;
  }
  return x.back();
}

} // namespace oracle
