#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <string>

namespace emt {

/// min c'x  subject to  G x <= h, x free.
struct InequalityLp {
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
};

struct LpOptions {
  double feasibility_tol = 1e-8; // max-norm of primal and dual residuals
  double optimality_tol = 1e-6;  // duality gap relative to max(1, |c'x|)
  int max_iterations = 200;
  double step_fraction = 0.99;
};

struct LpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd s; // slacks h - G x
  Eigen::VectorXd z; // multipliers of G x <= h
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  bool converged = false;
};

/// Name of the method implemented by solve_inequality_lp().
inline const std::string kLpMethodName =
    "mehrotra-predictor-corrector-ipm/quasidefinite-augmented-system/simplicial-ldlt-amd";

/// Primal-dual interior-point method with Mehrotra's predictor-corrector
/// steps. Each iteration factors the regularised quasi-definite augmented
/// system [-S/Z, G; G', 0] with a sparse LDL' factorisation (AMD ordering)
/// and refines the solution iteratively. `x0` seeds the
/// primal iterate; it need not be feasible.
LpSolution solve_inequality_lp(const InequalityLp& lp, const LpOptions& options,
                               const Eigen::VectorXd* x0 = nullptr);

} // namespace emt
