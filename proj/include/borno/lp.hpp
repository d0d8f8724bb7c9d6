#pragma once

#include <Eigen/Dense>

namespace borno {

/// minimize cost·x subject to eq_matrix·x = eq_rhs, le_matrix·x <= le_rhs, x >= 0.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd le_matrix;
  Eigen::VectorXd le_rhs;
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

// Dense two-phase simplex with Bland's rule. Sized for desk problems
// (a few hundred rows and columns).
LpResult solve_lp(const LinearProgram& lp, double tol = 1e-9);

}  // namespace borno
