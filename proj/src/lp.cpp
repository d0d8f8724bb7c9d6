#include "borno/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace borno {

namespace {

// Tableau: rows 0..m-1 constraints, last column rhs. basis[i] is the column
// basic in row i.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;
  int rows() const { return static_cast<int>(t.rows()); }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[r] = c;
  }
};

// Minimizes obj·x over the tableau's feasible set, restricted to columns
// [0, active_cols). Returns false when unbounded.
LpResult::Status run_simplex(Tableau& tab, const Eigen::VectorXd& obj, int active_cols,
                             double tol) {
  const int m = tab.rows();
  const int rhs = tab.cols();
  const int max_iter = 50 * (m + active_cols) + 1000;
  for (int iter = 0; iter < max_iter; ++iter) {
    // Reduced costs: obj_j - obj_B · column_j.
    int enter = -1;
    for (int j = 0; j < active_cols; ++j) {
      double rc = obj(j);
      for (int i = 0; i < m; ++i) rc -= obj(tab.basis[i]) * tab.t(i, j);
      if (rc < -tol) {
        enter = j;  // Bland: smallest index
        break;
      }
    }
    if (enter < 0) return LpResult::Status::Optimal;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = tab.t(i, enter);
      if (a > tol) {
        const double ratio = tab.t(i, rhs) / a;
        if (ratio < best - 1e-15 ||
            (std::abs(ratio - best) <= 1e-15 && leave >= 0 && tab.basis[i] < tab.basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return LpResult::Status::Unbounded;
    tab.pivot(leave, enter);
  }
  return LpResult::Status::IterationLimit;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
  const int n = static_cast<int>(lp.cost.size());
  const int me = static_cast<int>(lp.eq_rhs.size());
  const int ml = static_cast<int>(lp.le_rhs.size());
  const int m = me + ml;
  // Columns: x (n), slacks (ml), artificials (m), rhs.
  const int n_slack = ml;
  const int n_art = m;
  const int total = n + n_slack + n_art;
  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m, total + 1);
  tab.basis.assign(m, -1);
  for (int i = 0; i < me; ++i) {
    tab.t.row(i).head(n) = lp.eq_matrix.row(i);
    tab.t(i, total) = lp.eq_rhs(i);
  }
  for (int i = 0; i < ml; ++i) {
    tab.t.row(me + i).head(n) = lp.le_matrix.row(i);
    tab.t(me + i, n + i) = 1.0;
    tab.t(me + i, total) = lp.le_rhs(i);
  }
  for (int i = 0; i < m; ++i) {
    if (tab.t(i, total) < 0.0) tab.t.row(i) *= -1.0;
    // Slack with +1 after sign fix and rhs >= 0 can start basic.
    if (i >= me && tab.t(i, n + (i - me)) > 0.0) {
      tab.basis[i] = n + (i - me);
    } else {
      tab.t(i, n + n_slack + i) = 1.0;
      tab.basis[i] = n + n_slack + i;
    }
  }

  LpResult result;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
  phase1.tail(n_art).setOnes();
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i) need_phase1 |= tab.basis[i] >= n + n_slack;
  if (need_phase1) {
    auto status = run_simplex(tab, phase1, total, tol);
    if (status == LpResult::Status::IterationLimit) {
      result.status = status;
      return result;
    }
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= n + n_slack) infeas += tab.t(i, total);
    if (infeas > tol * (1.0 + lp.eq_rhs.cwiseAbs().sum() + lp.le_rhs.cwiseAbs().sum())) {
      result.status = LpResult::Status::Infeasible;
      return result;
    }
    // Drive remaining zero-level artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < n + n_slack) continue;
      for (int j = 0; j < n + n_slack; ++j) {
        if (std::abs(tab.t(i, j)) > tol) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(total);
  obj.head(n) = lp.cost;
  auto status = run_simplex(tab, obj, n + n_slack, tol);
  result.status = status;
  if (status != LpResult::Status::Optimal) return result;
  result.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n) result.x(tab.basis[i]) = tab.t(i, total);
  result.value = lp.cost.dot(result.x);
  return result;
}

}  // namespace borno
