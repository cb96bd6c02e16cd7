#include "bk/lp.hpp"

#include <cmath>

namespace bk {

LpResult lp_maximize(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c_in, double tol, int max_iters) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  if (b.minCoeff() <= 0.0)
    throw LpError("lp_maximize: b must be strictly positive (origin strictly feasible)");

  // column equilibration: monomial constraint columns span many orders of
  // magnitude, which would wreck the normal equations
  Eigen::VectorXd colscale(n);
  for (int j = 0; j < n; ++j) {
    double s = A_in.col(j).cwiseAbs().maxCoeff();
    colscale(j) = s > 0 ? s : 1.0;
  }
  Eigen::MatrixXd A = A_in * colscale.cwiseInverse().asDiagonal();
  Eigen::VectorXd c = c_in.cwiseQuotient(colscale);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = b;
  Eigen::VectorXd y = Eigen::VectorXd::Ones(m);

  double scale = 1.0 + b.lpNorm<Eigen::Infinity>() + c.lpNorm<Eigen::Infinity>();
  LpResult out;

  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd rp = b - A * x - s;
    Eigen::VectorXd rd = c - A.transpose() * y;
    double mu = y.dot(s) / m;
    out.iterations = it;
    out.gap = mu;

    if (mu < tol * scale && rp.lpNorm<Eigen::Infinity>() < tol * scale &&
        rd.lpNorm<Eigen::Infinity>() < tol * scale) {
      break;
    }
    if (x.lpNorm<Eigen::Infinity>() > 1e13 || !std::isfinite(mu))
      throw LpError("lp_maximize: iterates diverged (problem unbounded or constraint grid too sparse)");

    double sigma = 0.2;
    // r1 = rp - sigma*mu/y + s ;  D = s./y
    Eigen::VectorXd D = s.cwiseQuotient(y);
    Eigen::VectorXd r1 = rp - (sigma * mu) * y.cwiseInverse() + s;
    // clamp so nearly-active constraints cannot blow the normal equations
    // up to inf before the duality gap converges
    Eigen::VectorXd Dinv = D.cwiseMax(1e-16).cwiseInverse();

    Eigen::MatrixXd M = A.transpose() * Dinv.asDiagonal() * A;
    Eigen::VectorXd rhs = rd + A.transpose() * (Dinv.cwiseProduct(r1));
    double reg = 1e-13 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    for (int attempt = 0;; ++attempt) {
      Eigen::MatrixXd Mreg = M;
      Mreg.diagonal().array() += reg;
      ldlt.compute(Mreg);
      if (ldlt.info() == Eigen::Success) break;
      if (attempt >= 6) throw LpError("lp_maximize: normal equations not SPD");
      reg *= 100.0;
    }
    Eigen::VectorXd dx = ldlt.solve(rhs);
    Eigen::VectorXd dy = Dinv.cwiseProduct(A * dx - r1);
    Eigen::VectorXd ds = rp - A * dx;

    double ap = 1.0, ad = 1.0;
    for (int i = 0; i < m; ++i) {
      if (ds(i) < 0) ap = std::min(ap, -s(i) / ds(i));
      if (dy(i) < 0) ad = std::min(ad, -y(i) / dy(i));
    }
    ap = std::min(1.0, 0.99 * ap);
    ad = std::min(1.0, 0.99 * ad);

    x += ap * dx;
    s += ap * ds;
    y += ad * dy;
  }

  out.x = x.cwiseQuotient(colscale);
  out.objective = c.dot(x);
  return out;
}

}  // namespace bk
