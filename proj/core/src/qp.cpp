#include "wristkit/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace wristkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConstraintSet {
  // Rows a_i' x <= b_i.
  std::vector<Eigen::VectorXd> a;
  std::vector<double> b;
};

ConstraintSet assembleConstraints(const QPSpec& spec) {
  const int n = spec.dim();
  ConstraintSet cs;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(spec.upper[i])) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row[i] = 1.0;
      cs.a.push_back(row);
      cs.b.push_back(spec.upper[i]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(spec.lower[i])) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row[i] = -1.0;
      cs.a.push_back(row);
      cs.b.push_back(-spec.lower[i]);
    }
  }
  for (int r = 0; r < spec.ineq_matrix.rows(); ++r) {
    cs.a.push_back(spec.ineq_matrix.row(r).transpose());
    cs.b.push_back(spec.ineq_bound[r]);
  }
  return cs;
}

}  // namespace

void QPSpec::validate() const {
  const int n = dim();
  if (hessian.rows() != n || hessian.cols() != n || lower.size() != n || upper.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "QP blocks have inconsistent sizes");
  }
  const double scale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
  if ((hessian - hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorCode::DegenerateInput, "hessian is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
  if (eig.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw Error(ErrorCode::DegenerateInput, "hessian is not positive semidefinite");
  }
  for (int i = 0; i < n; ++i) {
    if (lower[i] > upper[i]) {
      throw Error(ErrorCode::Infeasible, "lower bound exceeds upper bound");
    }
  }
}

QPSolution solveQp(const QPSpec& spec) {
  const int n = spec.dim();
  if (spec.hessian.rows() != n || spec.hessian.cols() != n || spec.lower.size() != n ||
      spec.upper.size() != n ||
      (spec.ineq_matrix.rows() > 0 && spec.ineq_matrix.cols() != n) ||
      spec.ineq_matrix.rows() != spec.ineq_bound.size()) {
    throw Error(ErrorCode::DimensionMismatch, "QP blocks have inconsistent sizes");
  }
  for (int i = 0; i < n; ++i) {
    if (spec.lower[i] > spec.upper[i]) {
      throw Error(ErrorCode::Infeasible, "lower bound exceeds upper bound");
    }
  }

  const double h_scale = std::max(1.0, spec.hessian.cwiseAbs().maxCoeff());
  if ((spec.hessian - spec.hessian.transpose()).cwiseAbs().maxCoeff() > 1e-10 * h_scale) {
    throw Error(ErrorCode::DegenerateInput, "hessian is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec.hessian);
  const double eig_min = eig.eigenvalues().minCoeff();
  if (eig_min < -1e-10 * h_scale) {
    throw Error(ErrorCode::DegenerateInput, "hessian is not positive semidefinite");
  }
  // Semidefinite instances get a tiny ridge so the dual active-set iteration
  // has a unique subproblem minimizer; residuals are reported against the
  // original hessian.
  const double ridge_floor = 1e-11 * h_scale;
  const double ridge = eig_min < ridge_floor ? (ridge_floor - std::min(eig_min, 0.0)) : 0.0;
  const Eigen::MatrixXd G =
      spec.hessian + ridge * Eigen::MatrixXd::Identity(n, n);

  const ConstraintSet cs = assembleConstraints(spec);
  const int m = static_cast<int>(cs.a.size());

  Eigen::VectorXd x = G.ldlt().solve(-spec.gradient);
  std::vector<int> active;          // constraint indices
  std::vector<double> mult;         // multipliers aligned with `active`
  Eigen::VectorXd all_mult = Eigen::VectorXd::Zero(m);

  const int max_iterations = 100 + 20 * (n + m);
  int iterations = 0;

  auto solveDirections = [&](const Eigen::VectorXd& np, Eigen::VectorXd& z,
                             Eigen::VectorXd& r) {
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = G;
    for (int j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = cs.a[active[j]];
      kkt.block(n + j, 0, 1, n) = cs.a[active[j]].transpose();
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
    rhs.head(n) = np;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    z = sol.head(n);
    r = sol.tail(k);
  };

  while (true) {
    if (++iterations > max_iterations) {
      throw Error(ErrorCode::MaxIterations, "active-set iteration limit exceeded");
    }
    // Most violated inactive constraint; lowest index breaks ties.
    int p = -1;
    double worst = -1e-11;
    for (int i = 0; i < m; ++i) {
      bool is_active = false;
      for (int idx : active) {
        if (idx == i) { is_active = true; break; }
      }
      if (is_active) continue;
      const double slack = cs.b[i] - cs.a[i].dot(x);
      const double tol = 1e-11 * (1.0 + std::abs(cs.b[i]));
      if (slack < -tol && slack < worst) {
        worst = slack;
        p = i;
      }
    }
    if (p < 0) break;  // primal feasible => optimal

    const Eigen::VectorXd& np = cs.a[p];
    double up = 0.0;
    while (true) {
      if (++iterations > max_iterations) {
        throw Error(ErrorCode::MaxIterations, "active-set iteration limit exceeded");
      }
      Eigen::VectorXd z, r;
      solveDirections(np, z, r);
      const double curvature = np.dot(z);  // = z'Gz >= 0

      // Dual blocking step.
      double t_dual = kInf;
      int blocker = -1;
      for (std::size_t j = 0; j < active.size(); ++j) {
        if (r[j] > 1e-14) {
          const double t = mult[j] / r[j];
          if (t < t_dual) {
            t_dual = t;
            blocker = static_cast<int>(j);
          }
        }
      }
      const double slack_p = cs.b[p] - np.dot(x);
      double t_full = kInf;
      if (curvature > 1e-14) t_full = -slack_p / curvature;

      const double t = std::min(t_full, t_dual);
      if (!std::isfinite(t)) {
        throw Error(ErrorCode::Infeasible, "constraints are mutually inconsistent");
      }
      x -= t * z;
      for (std::size_t j = 0; j < active.size(); ++j) mult[j] -= t * r[j];
      up += t;

      if (t == t_full && t_full <= t_dual) {
        active.push_back(p);
        mult.push_back(up);
        break;
      }
      // Drop the blocking constraint and keep working on p.
      all_mult[active[blocker]] = 0.0;
      active.erase(active.begin() + blocker);
      mult.erase(mult.begin() + blocker);
    }
    for (std::size_t j = 0; j < active.size(); ++j) all_mult[active[j]] = mult[j];
  }

  auto residuals = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& mu,
                       double* stat, double* feas, double* comp) {
    Eigen::VectorXd kkt_grad = spec.hessian * xv + spec.gradient;
    for (int i = 0; i < m; ++i) kkt_grad += mu[i] * cs.a[i];
    *stat = kkt_grad.cwiseAbs().maxCoeff();
    *feas = 0.0;
    *comp = 0.0;
    for (int i = 0; i < m; ++i) {
      const double slack = cs.b[i] - cs.a[i].dot(xv);
      *feas = std::max(*feas, -slack);
      *comp = std::max(*comp, std::abs(mu[i] * slack));
    }
    *feas = std::max(0.0, *feas);
  };

  double stat, feas, comp;
  residuals(x, all_mult, &stat, &feas, &comp);

  // Polish: re-solve the KKT system on the final active set with one step of
  // iterative refinement; keep it only when it tightens the residuals.
  {
    const int k = static_cast<int>(active.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = G;
    for (int j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = cs.a[active[j]];
      kkt.block(n + j, 0, 1, n) = cs.a[active[j]].transpose();
    }
    Eigen::VectorXd rhs(n + k);
    rhs.head(n) = -spec.gradient;
    for (int j = 0; j < k; ++j) rhs[n + j] = cs.b[active[j]];
    const auto lu = kkt.fullPivLu();
    Eigen::VectorXd sol0 = lu.solve(rhs);
    sol0 += lu.solve(rhs - kkt * sol0);

    Eigen::VectorXd x_p = sol0.head(n);
    Eigen::VectorXd mu_p = Eigen::VectorXd::Zero(m);
    bool dual_ok = true;
    for (int j = 0; j < k; ++j) {
      const double v = sol0[n + j];
      if (v < -1e-9) dual_ok = false;
      mu_p[active[j]] = std::max(0.0, v);
    }
    if (dual_ok) {
      double stat_p, feas_p, comp_p;
      residuals(x_p, mu_p, &stat_p, &feas_p, &comp_p);
      if (std::max({stat_p, feas_p, comp_p}) < std::max({stat, feas, comp})) {
        x = x_p;
        all_mult = mu_p;
        stat = stat_p;
        feas = feas_p;
        comp = comp_p;
      }
    }
  }

  QPSolution sol;
  sol.x = x;
  sol.multipliers = all_mult;
  sol.iterations = iterations;
  sol.stationarity = stat;
  sol.primal_feasibility = feas;
  sol.complementarity = comp;
  sol.objective = 0.5 * x.dot(spec.hessian * x) + spec.gradient.dot(x);
  return sol;
}

}  // namespace wristkit
