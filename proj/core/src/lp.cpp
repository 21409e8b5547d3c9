#include "emt/lp.hpp"

#include "emt/error.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace emt {

namespace {

// Largest step in (0, 1] keeping v + a dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0)
      a = std::min(a, -v(i) / dv(i));
  return a;
}

} // namespace

LpSolution solve_inequality_lp(const InequalityLp& lp, const LpOptions& opt,
                               const Eigen::VectorXd* x0) {
  const Eigen::Index m = lp.G.rows(), nv = lp.G.cols();
  if (lp.h.size() != m || lp.c.size() != nv)
    throw Error(ErrorCode::LengthMismatch, "inconsistent LP dimensions");
  const Eigen::SparseMatrix<double> Gt = lp.G.transpose();

  LpSolution sol;
  sol.x = x0 ? *x0 : Eigen::VectorXd::Zero(nv);
  sol.s = (lp.h - lp.G * sol.x).cwiseMax(1.0);
  sol.z = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd& x = sol.x;
  Eigen::VectorXd& s = sol.s;
  Eigen::VectorXd& z = sol.z;

  // Quasi-definite augmented matrix [-D - d I, G; G', p I] over (dz, dx),
  // D = diag(s / z). Only the lower triangle is stored; the diagonal entries
  // of the first block are rewritten every iteration.
  const double reg_dual = 1e-14, reg_primal = 1e-12;
  Eigen::SparseMatrix<double> K(m + nv, m + nv);
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(lp.G.nonZeros() + m + nv));
    for (Eigen::Index i = 0; i < m; ++i)
      trip.emplace_back(i, i, -1.0);
    for (Eigen::Index k = 0; k < lp.G.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(lp.G, k); it; ++it)
        trip.emplace_back(m + it.col(), it.row(), it.value());
    for (Eigen::Index j = 0; j < nv; ++j)
      trip.emplace_back(m + j, m + j, reg_primal);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
  }
  std::vector<double*> block_diag(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    block_diag[static_cast<std::size_t>(i)] = &K.coeffRef(i, i);
  std::vector<double*> primal_diag(static_cast<std::size_t>(nv));
  for (Eigen::Index j = 0; j < nv; ++j)
    primal_diag[static_cast<std::size_t>(j)] = &K.coeffRef(m + j, m + j);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  ldlt.analyzePattern(K);

  const double hscale = 1.0 + lp.h.lpNorm<Eigen::Infinity>();
  const double cscale = 1.0 + lp.c.lpNorm<Eigen::Infinity>();
  Eigen::VectorXd dx(nv), ds(m), dz(m), rc(m), d(m);

  for (int it = 0;; ++it) {
    const Eigen::VectorXd rp = lp.G * x + s - lp.h;
    const Eigen::VectorXd rd = Gt * z + lp.c;
    const double mu = s.dot(z) / static_cast<double>(m);
    sol.objective = lp.c.dot(x);
    sol.primal_residual = rp.lpNorm<Eigen::Infinity>();
    sol.dual_residual = rd.lpNorm<Eigen::Infinity>();
    sol.gap = s.dot(z);
    sol.iterations = it;
    if (sol.primal_residual <= opt.feasibility_tol * hscale &&
        sol.dual_residual <= opt.feasibility_tol * cscale &&
        sol.gap <= opt.optimality_tol * std::max(1.0, std::fabs(sol.objective))) {
      sol.converged = true;
      break;
    }
    if (it >= opt.max_iterations)
      break;

    d = s.cwiseQuotient(z);
    // Quasi-definiteness guarantees pivot signs in exact arithmetic only;
    // a zero pivot is retried with stronger regularisation.
    for (double boost = 1.0;; boost *= 100.0) {
      for (Eigen::Index i = 0; i < m; ++i)
        *block_diag[static_cast<std::size_t>(i)] = -d(i) - boost * reg_dual;
      for (Eigen::Index j = 0; j < nv; ++j)
        *primal_diag[static_cast<std::size_t>(j)] = boost * reg_primal;
      ldlt.factorize(K);
      if (ldlt.info() == Eigen::Success)
        break;
      if (boost > 1e7)
        throw Error(ErrorCode::SolverLimit, "augmented-system factorisation failed");
    }

    // Solves G dx - D dz = -rp + r_c / z, G' dz = -rd, then recovers ds.
    auto solve = [&](const Eigen::VectorXd& r_c) {
      Eigen::VectorXd rhs(m + nv);
      rhs.head(m) = -rp + r_c.cwiseQuotient(z);
      rhs.tail(nv) = -rd;
      Eigen::VectorXd sol_k = ldlt.solve(rhs);
      // Refine against the unregularised system.
      for (int k = 0; k < 10; ++k) {
        Eigen::VectorXd res(m + nv);
        res.head(m) = rhs.head(m) - (lp.G * sol_k.tail(nv) - d.cwiseProduct(sol_k.head(m)));
        res.tail(nv) = rhs.tail(nv) - Gt * sol_k.head(m);
        sol_k += ldlt.solve(res);
      }
      dz = sol_k.head(m);
      dx = sol_k.tail(nv);
      ds = -(r_c + s.cwiseProduct(dz)).cwiseQuotient(z);
    };

    // predictor
    rc = s.cwiseProduct(z);
    solve(rc);
    const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(m);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    // corrector
    rc = s.cwiseProduct(z) + ds.cwiseProduct(dz) - Eigen::VectorXd::Constant(m, sigma * mu);
    solve(rc);
    const double a = std::min(1.0, opt.step_fraction * std::min(max_step(s, ds), max_step(z, dz)));
    x += a * dx;
    s += a * ds;
    z += a * dz;
  }
  return sol;
}

} // namespace emt
