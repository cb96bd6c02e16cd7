#pragma once

// Small dense linear programming core: maximize c^T x subject to A x <= b
// with free x, solved by a primal-dual interior-point method on the normal
// equations. Sized for a few hundred unknowns and tens of thousands of
// inequality rows.

#include <Eigen/Dense>

#include <stdexcept>

namespace bk {

struct LpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  double gap = 0.0;  // final duality measure
};

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requires b > 0 so that x = 0 is strictly feasible. Throws LpError on
// unboundedness or failure to converge.
LpResult lp_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, double tol = 1e-10, int max_iters = 100);

}  // namespace bk
