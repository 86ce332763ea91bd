#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qscram {

// min c.x  subject to  A x = b, x >= 0, solved by the dense two-phase
// tableau simplex with Bland's anti-cycling rule. Small problems only
// (hundreds of variables). Every optimal solve carries a primal-dual
// certificate extracted from the final basis.
struct LpResult {
  enum class Status { optimal, infeasible, unbounded } status = Status::infeasible;
  Eigen::VectorXd x;        // primal solution
  Eigen::VectorXd y;        // dual vector (one entry per row)
  double objective = 0;
  double primal_residual = 0;   // ||A x - b||_inf
  double dual_violation = 0;    // max(0, max_j (y.A_j - c_j))
  double duality_gap = 0;       // |c.x - b.y|

  bool certified(double tol = 1e-8) const {
    return status == Status::optimal && primal_residual < tol && dual_violation < tol &&
           duality_gap < tol;
  }
};

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace qscram
