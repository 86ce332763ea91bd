#include "qscram/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qscram {

namespace {

constexpr double kPivotEps = 1e-11;

struct Tableau {
  // rows: m constraint rows + 1 cost row; cols: n variables + 1 rhs
  Eigen::MatrixXd t;
  std::vector<int> basis;  // basic variable per row
  int m, n;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int r = 0; r <= m; ++r) {
      if (r == row) continue;
      double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Bland: entering = smallest index with negative reduced cost;
  // leaving = smallest ratio, ties by smallest basic variable index.
  bool iterate(int active_cols) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < active_cols; ++j)
        if (t(m, j) < -kPivotEps) { enter = j; break; }
      if (enter < 0) return true;  // optimal
      int leave = -1;
      double best = 0;
      for (int r = 0; r < m; ++r) {
        double a = t(r, enter);
        if (a > kPivotEps) {
          double ratio = t(r, n) / a;
          if (leave < 0 || ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && basis[static_cast<std::size_t>(r)] <
                                           basis[static_cast<std::size_t>(leave)])) {
            leave = r;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw std::invalid_argument("solve_lp: shape mismatch");

  Tableau tb;
  tb.m = m;
  tb.n = n + m;  // artificials appended
  tb.t = Eigen::MatrixXd::Zero(m + 1, tb.n + 1);
  tb.basis.resize(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    double s = b[r] < 0 ? -1.0 : 1.0;
    tb.t.block(r, 0, 1, n) = s * a.row(r);
    tb.t(r, n + r) = 1.0;
    tb.t(r, tb.n) = s * b[r];
    tb.basis[static_cast<std::size_t>(r)] = n + r;
  }
  // phase 1: minimize sum of artificials
  for (int j = 0; j < n; ++j) tb.t(m, j) = -tb.t.block(0, j, m, 1).sum();
  tb.t(m, tb.n) = -tb.t.block(0, tb.n, m, 1).sum();

  LpResult res;
  if (!tb.iterate(n)) { res.status = LpResult::Status::infeasible; return res; }
  if (tb.t(m, tb.n) < -1e-7) { res.status = LpResult::Status::infeasible; return res; }
  // drive remaining artificials out of the basis where possible
  for (int r = 0; r < m; ++r) {
    if (tb.basis[static_cast<std::size_t>(r)] >= n) {
      for (int j = 0; j < n; ++j)
        if (std::abs(tb.t(r, j)) > 1e-9) { tb.pivot(r, j); break; }
    }
  }

  // phase 2 cost row
  tb.t.row(m).setZero();
  for (int j = 0; j < n; ++j) tb.t(m, j) = c[j];
  for (int r = 0; r < m; ++r) {
    int bv = tb.basis[static_cast<std::size_t>(r)];
    if (bv < n && c[bv] != 0.0) tb.t.row(m) -= c[bv] * tb.t.row(r);
  }
  // iterate(n) never considers the artificial columns for entering
  if (!tb.iterate(n)) { res.status = LpResult::Status::unbounded; return res; }

  res.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r) {
    int bv = tb.basis[static_cast<std::size_t>(r)];
    if (bv < n) res.x[bv] = tb.t(r, tb.n);
  }
  res.objective = c.dot(res.x);

  // dual certificate from the basis: solve B^T y = c_B on the original data
  Eigen::MatrixXd bmat(m, m);
  Eigen::VectorXd cb(m);
  for (int r = 0; r < m; ++r) {
    int bv = tb.basis[static_cast<std::size_t>(r)];
    if (bv < n) {
      bmat.col(r) = a.col(bv);
      cb[r] = c[bv];
    } else {
      // leftover artificial on a (numerically) redundant row: unit column
      bmat.col(r) = Eigen::VectorXd::Zero(m);
      bmat(bv - n, r) = 1.0;
      cb[r] = 0.0;
    }
  }
  res.y = bmat.transpose().fullPivLu().solve(cb);
  res.primal_residual = (a * res.x - b).cwiseAbs().maxCoeff();
  Eigen::VectorXd reduced = c - a.transpose() * res.y;
  res.dual_violation = std::max(0.0, -reduced.minCoeff());
  res.duality_gap = std::abs(res.objective - b.dot(res.y));
  res.status = LpResult::Status::optimal;
  return res;
}

}  // namespace qscram
