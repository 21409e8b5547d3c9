#include "emt/diagnostics.hpp"

#include "emt/csv.hpp"
#include "emt/error.hpp"
#include "emt/random.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numbers>
#include <ostream>

namespace emt {

namespace {

double sample_sd(std::span<const double> v) {
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v)
    mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v)
    ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

void check_levels(std::span<const double> levels) {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!(levels[i] >= 0.0))
      throw Error(ErrorCode::NegativeLevel, "fitted level must be non-negative", i + 1);
}

// Centres a column and scales it to unit norm; false if it is constant.
bool standardise(Eigen::Ref<Eigen::VectorXd> col) {
  col.array() -= col.mean();
  const double norm = col.norm();
  if (!(norm > 1e-12 * std::sqrt(static_cast<double>(col.size()))))
    return false;
  col /= norm;
  return true;
}

} // namespace

std::vector<std::int64_t> simulate_poisson_from_fit(std::span<const double> levels,
                                                    std::uint64_t seed) {
  check_levels(levels);
  std::vector<std::int64_t> out(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    CounterRng rng(seed, i);
    out[i] = rng.poisson(levels[i]);
  }
  return out;
}

std::uint64_t replicate_seed(std::uint64_t seed, int replicate) {
  return mix64(seed ^ (0xA24BAED4963EE407ull * static_cast<std::uint64_t>(replicate + 1)));
}

DispersionReport overdispersion_ratio(std::span<const double> counts,
                                      std::span<const double> levels, int n_sims,
                                      std::uint64_t seed) {
  if (counts.size() != levels.size())
    throw Error(ErrorCode::LengthMismatch, "counts and levels differ in length");
  if (counts.size() < 2)
    throw Error(ErrorCode::TooShort, "need at least two observations");
  if (n_sims < 1)
    throw Error(ErrorCode::InvalidArgument, "n_sims must be positive");
  check_levels(levels);
  DispersionReport rep;
  rep.n_sims = n_sims;
  rep.seed = seed;
  std::vector<double> diff(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    diff[i] = counts[i] - levels[i];
  rep.sd_residuals = sample_sd(diff);
  double total = 0.0;
  for (int r = 0; r < n_sims; ++r) {
    const auto sim = simulate_poisson_from_fit(levels, replicate_seed(seed, r));
    for (std::size_t i = 0; i < sim.size(); ++i)
      diff[i] = static_cast<double>(sim[i]) - levels[i];
    total += sample_sd(diff);
  }
  rep.sd_poisson = total / n_sims;
  if (!(rep.sd_poisson > 0.0))
    throw Error(ErrorCode::NegativeLevel, "Poisson reconstruction has zero spread");
  rep.overdispersion_pct = 100.0 * (rep.sd_residuals / rep.sd_poisson - 1.0);
  return rep;
}

void write_dispersion_csv(std::ostream& out, const DispersionReport& r) {
  write_csv_row(out, {"sd_resid", "sd_poisson", "overdispersion_pct", "n_sims", "seed"});
  write_csv_row(out, {format_number(r.sd_residuals), format_number(r.sd_poisson),
                      format_number(r.overdispersion_pct), std::to_string(r.n_sims),
                      std::to_string(r.seed)});
}

double Covariate::period_or_lag() const {
  if (kind == Kind::lag)
    return order;
  return 2.0 * static_cast<double>(n) / order;
}

std::string Covariate::name() const {
  switch (kind) {
  case Kind::sine: return "sin" + std::to_string(order);
  case Kind::cosine: return "cos" + std::to_string(order);
  case Kind::lag: return "lag" + std::to_string(order);
  }
  return {};
}

CandidateSet harmonic_candidates(std::size_t n) {
  if (n < 4)
    throw Error(ErrorCode::TooShort, "harmonic candidates need n >= 4");
  const std::size_t half = n / 2;
  CandidateSet set;
  set.columns.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * half));
  const double nd = static_cast<double>(n);
  for (std::size_t j = 1; j <= half; ++j) {
    const auto s = static_cast<Eigen::Index>(2 * (j - 1));
    for (std::size_t t = 1; t <= n; ++t) {
      const double angle = std::numbers::pi * static_cast<double>(j) * static_cast<double>(t) / nd;
      set.columns(static_cast<Eigen::Index>(t - 1), s) = std::sin(angle);
      set.columns(static_cast<Eigen::Index>(t - 1), s + 1) = std::cos(angle);
    }
    set.ids.push_back({Covariate::Kind::sine, static_cast<int>(j), n});
    set.ids.push_back({Covariate::Kind::cosine, static_cast<int>(j), n});
    if (!standardise(set.columns.col(s)) || !standardise(set.columns.col(s + 1)))
      throw Error(ErrorCode::DegenerateDesign, "constant harmonic candidate");
  }
  return set;
}

LagDesign lag_candidates(std::span<const double> residuals, std::size_t max_lag) {
  const std::size_t n = residuals.size();
  if (max_lag < 1 || 2 * max_lag >= n)
    throw Error(ErrorCode::LagTooLarge, "need 1 <= max_lag < n / 2");
  const std::size_t m = n - max_lag;
  LagDesign d;
  d.response.assign(residuals.begin() + static_cast<std::ptrdiff_t>(max_lag), residuals.end());
  d.candidates.columns.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(max_lag));
  for (std::size_t l = 1; l <= max_lag; ++l) {
    const auto c = static_cast<Eigen::Index>(l - 1);
    for (std::size_t t = 0; t < m; ++t)
      d.candidates.columns(static_cast<Eigen::Index>(t), c) = residuals[max_lag + t - l];
    if (!standardise(d.candidates.columns.col(c)))
      throw Error(ErrorCode::DegenerateDesign, "constant lag candidate");
    d.candidates.ids.push_back({Covariate::Kind::lag, static_cast<int>(l), n});
  }
  return d;
}

SelectionResult gaussian_stepwise_select(std::span<const double> response,
                                         const CandidateSet& candidates, double cutoff) {
  const auto n = static_cast<Eigen::Index>(response.size());
  const Eigen::Index p = candidates.columns.cols();
  if (p == 0 || candidates.ids.size() != static_cast<std::size_t>(p))
    throw Error(ErrorCode::InvalidArgument, "empty or inconsistent candidate set");
  if (candidates.columns.rows() != n)
    throw Error(ErrorCode::LengthMismatch, "response and candidates differ in length");
  if (n < 4)
    throw Error(ErrorCode::TooShort, "selection needs at least 4 observations");

  const Eigen::MatrixXd& C = candidates.columns;
  const Eigen::VectorXd norms2 = C.colwise().squaredNorm().transpose();
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(norms2(j) > 1e-24))
      throw Error(ErrorCode::DegenerateDesign, "candidate " + candidates.ids[static_cast<std::size_t>(j)].name() +
                                                   " is identically zero");

  Eigen::VectorXd res = Eigen::Map<const Eigen::VectorXd>(response.data(), n);
  res.array() -= res.mean();
  Eigen::VectorXd proj2 = Eigen::VectorXd::Zero(p); // squared norm of projection on chosen span
  std::vector<char> active(static_cast<std::size_t>(p), 1);
  Eigen::MatrixXd basis(n, 0);

  SelectionResult out;
  out.cutoff = cutoff;
  for (;;) {
    const auto k = static_cast<double>(out.selected.size());
    const double dof = static_cast<double>(n) - k - 1.0;
    if (dof <= 1.0)
      break;
    const double rss = res.squaredNorm();
    if (!(rss > 0.0))
      break;
    const Eigen::VectorXd g = C.transpose() * res;
    Eigen::Index best = -1;
    double best_r2 = -1.0;
    int remaining = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (!active[static_cast<std::size_t>(j)])
        continue;
      const double free2 = norms2(j) - proj2(j);
      if (free2 <= 1e-10 * norms2(j)) {
        active[static_cast<std::size_t>(j)] = 0; // inside the chosen span
        continue;
      }
      ++remaining;
      const double r2 = std::min(1.0, g(j) * g(j) / (free2 * rss));
      if (r2 > best_r2) {
        best_r2 = r2;
        best = j;
      }
    }
    if (best < 0)
      break;
    const double tail = boost::math::ibetac(0.5, 0.5 * dof, best_r2);
    const double pval = std::min(1.0, remaining * tail);
    if (pval > cutoff)
      break;

    Eigen::VectorXd q = C.col(best);
    for (int pass = 0; pass < 2; ++pass)
      if (basis.cols() > 0)
        q -= basis * (basis.transpose() * q);
    q.normalize();
    const double coef = q.dot(res);
    res -= coef * q;
    proj2 += (C.transpose() * q).array().square().matrix();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = q;
    active[static_cast<std::size_t>(best)] = 0;
    out.selected.push_back({candidates.ids[static_cast<std::size_t>(best)], pval, coef});
  }
  out.steps = static_cast<int>(out.selected.size());
  return out;
}

void write_selection_csv(std::ostream& out, const SelectionResult& r) {
  write_csv_row(out, {"step", "covariate", "period_or_lag", "p_value", "coefficient"});
  for (std::size_t i = 0; i < r.selected.size(); ++i) {
    const auto& s = r.selected[i];
    write_csv_row(out, {std::to_string(i + 1), s.id.name(), format_number(s.id.period_or_lag()),
                        format_number(s.p_value), format_number(s.coefficient)});
  }
}

} // namespace emt
