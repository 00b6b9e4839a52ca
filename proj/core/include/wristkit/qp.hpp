#pragma once

#include <Eigen/Dense>

#include "wristkit/error.hpp"

namespace wristkit {

/// Box- and linearly-constrained convex quadratic program
///   min 1/2 x'Hx + g'x   s.t.  lower <= x <= upper,  ineq_matrix x <= ineq_bound.
struct QPSpec {
  Eigen::MatrixXd hessian;   // n x n, symmetric PSD
  Eigen::VectorXd gradient;  // n
  Eigen::VectorXd lower;     // n, entries may be -inf
  Eigen::VectorXd upper;     // n, entries may be +inf
  Eigen::MatrixXd ineq_matrix{0, 0};  // optional m x n block
  Eigen::VectorXd ineq_bound{0};

  int dim() const { return static_cast<int>(gradient.size()); }

  /// Checks the type invariants: H symmetric within 1e-10, eigenvalues
  /// >= -1e-10, lower <= upper. Throws DegenerateInput / Infeasible.
  void validate() const;
};

struct QPSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;    // one per assembled <= row (uppers, lowers, general)
  double stationarity = 0.0;      // ||Hx + g + A'mu||_inf
  double primal_feasibility = 0.0;  // max(0, max_i(a_i'x - b_i))
  double complementarity = 0.0;   // max_i |mu_i (b_i - a_i'x)|
  double objective = 0.0;
  int iterations = 0;
};

/// Dual active-set solve (constraints added one at a time from the
/// unconstrained minimizer, with dual-feasibility sweeps dropping blockers).
/// Deterministic: fixed most-violated / lowest-index tie-breaking and no
/// randomized pivoting. Throws Infeasible, MaxIterations, DegenerateInput,
/// DimensionMismatch.
QPSolution solveQp(const QPSpec& spec);

}  // namespace wristkit
