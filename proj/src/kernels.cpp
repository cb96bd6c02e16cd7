#include "bk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace bk {

namespace {

// log(sum_j |(T v)_j|^2) on the mp path; prec follows the basis.
double log_btilde_mp(const OrthoBasis& B, const Point2& x) {
  const MpMatrix& T = *B.transform_mp;
  int d = T.dim();
  mpfr_prec_t prec = std::max<mpfr_prec_t>(B.precision_bits, 128);
  auto mons = monomial_list(B.nvars, B.k);
  std::vector<mp::Complex> pw1(B.k + 1, mp::Complex(prec)), pw2(B.k + 1, mp::Complex(prec));
  mp::Complex z1(x(0), prec), z2(x(1), prec), tmp(prec);
  pw1[0].set(std::complex<double>(1.0, 0.0));
  pw2[0].set(std::complex<double>(1.0, 0.0));
  for (int s = 1; s <= B.k; ++s) {
    tmp.set_zero(); tmp.addmul(pw1[s - 1], z1); pw1[s].set(tmp);
    tmp.set_zero(); tmp.addmul(pw2[s - 1], z2); pw2[s].set(tmp);
  }
  std::vector<mp::Complex> v(d, mp::Complex(prec));
  for (int i = 0; i < d; ++i) {
    if (B.nvars == 1) {
      v[i].set(pw1[mons[i].a]);
    } else {
      v[i].set_zero();
      v[i].addmul(pw1[mons[i].a], pw2[mons[i].b]);
    }
  }
  mp::Real acc(prec), t(prec);
  mp::Complex u(prec);
  for (int j = 0; j < d; ++j) {
    u.set_zero();
    for (int m = 0; m <= j; ++m) u.addmul(T.at(j, m), v[m]);
    mpfr_sqr(t.raw(), u.re.raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
    mpfr_sqr(t.raw(), u.im.raw(), MPFR_RNDN);
    mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
  }
  mpfr_log(acc.raw(), acc.raw(), MPFR_RNDN);
  return acc.to_double();
}

Eigen::VectorXcd monomial_vector(int nvars, int k, const Point2& x) {
  auto mons = monomial_list(nvars, k);
  Eigen::VectorXcd v(mons.size());
  std::vector<Cplx> pw1(k + 1), pw2(k + 1);
  pw1[0] = pw2[0] = 1.0;
  for (int s = 1; s <= k; ++s) {
    pw1[s] = pw1[s - 1] * x(0);
    pw2[s] = pw2[s - 1] * x(1);
  }
  for (size_t i = 0; i < mons.size(); ++i)
    v(i) = nvars == 1 ? pw1[mons[i].a] : pw1[mons[i].a] * pw2[mons[i].b];
  return v;
}

}  // namespace

BergmanValue bergman_at(const OrthoBasis& B, const WeightedMeasure& m, const Point2& x) {
  BergmanValue out;
  bool need_mp = !B.double_safe || B.transform.size() == 0;
  if (!need_mp) {
    Eigen::VectorXcd v = monomial_vector(B.nvars, B.k, x);
    Eigen::VectorXcd u = B.transform.triangularView<Eigen::Lower>() * v;
    double bt = u.squaredNorm();
    if (std::isfinite(bt) && bt > 0) {
      out.b_tilde = bt;
      out.log_b_tilde = std::log(bt);
    } else {
      need_mp = true;
    }
  }
  if (need_mp) {
    if (!B.transform_mp)
      throw OrthoError("bergman_at: double evaluation overflowed and no mp transform present");
    out.log_b_tilde = log_btilde_mp(B, x);
    out.b_tilde = std::exp(out.log_b_tilde);  // may be inf/0 in double range
  }
  double q = m.weight.eval(x);
  out.b_k = std::exp(out.log_b_tilde - 2.0 * B.k * q);
  return out;
}

std::uint64_t basis_fingerprint(const OrthoBasis& B) {
  // FNV-1a over the down-converted transform bytes
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double d) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  };
  for (int i = 0; i < B.transform.rows(); ++i)
    for (int j = 0; j <= i; ++j) {
      mix(B.transform(i, j).real());
      mix(B.transform(i, j).imag());
    }
  return h;
}

double sup_bergman(const OrthoBasis& B, const WeightedMeasure& m, double grid_scale) {
  int n_per_dim = std::max(32, int(std::ceil(8.0 * B.k * grid_scale)));

  double best = 0.0;
  for (const Patch& p : m.set.patches) {
    auto value_at = [&](const Eigen::Vector2d& t) {
      Point2 z = p.chart(t);
      return bergman_at(B, m, z).b_k;
    };
    if (p.param_dim == 1) {
      double a = p.lo(0), b = p.hi(0);
      double h = (b - a) / n_per_dim;
      std::vector<std::pair<double, double>> top;  // (value, t)
      for (int i = 0; i < n_per_dim; ++i) {
        double t = a + (p.periodic ? i * h : i * (b - a) / (n_per_dim - 1));
        Eigen::Vector2d tv;
        tv << t, 0.0;
        double v = value_at(tv);
        top.emplace_back(v, t);
      }
      std::sort(top.rbegin(), top.rend());
      top.resize(std::min<size_t>(5, top.size()));
      for (auto [v0, t0] : top) {
        // golden-section polish on [t0 - h, t0 + h]
        double lo = t0 - h, hi = t0 + h;
        const double gr = 0.6180339887498949;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        Eigen::Vector2d tv;
        tv << x1, 0.0;
        double f1 = value_at(tv);
        tv << x2, 0.0;
        double f2 = value_at(tv);
        for (int it = 0; it < 40; ++it) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            tv << x2, 0.0;
            f2 = value_at(tv);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            tv << x1, 0.0;
            f1 = value_at(tv);
          }
        }
        best = std::max({best, v0, f1, f2});
      }
    } else {
      // 2-D patch: full tensor grid, then coordinate-wise polish
      double h0 = (p.hi(0) - p.lo(0)) / n_per_dim;
      double h1 = (p.hi(1) - p.lo(1)) / n_per_dim;
      double best_v = 0.0;
      Eigen::Vector2d best_t;
      for (int i = 0; i < n_per_dim; ++i)
        for (int j = 0; j < n_per_dim; ++j) {
          Eigen::Vector2d t;
          t << p.lo(0) + i * h0, p.lo(1) + j * h1;
          double v = value_at(t);
          if (v > best_v) {
            best_v = v;
            best_t = t;
          }
        }
      best = std::max(best, best_v);
    }
  }
  return best;
}

double bergman_trace(const OrthoBasis& B, const WeightedMeasure& m, int k) {
  WeightedMeasure m2 = build_measure(m.set, m.density, m.weight,
                                     std::max(2 * m.quad_order, 2 * (4 * k + 16)));
  GramMatrix G2 = gram(m2, k, B.precision_bits);
  int d = poly_dim(B.nvars, k);

  if (!B.transform_mp) {
    Eigen::MatrixXcd G2d;
    if (G2.double_backend) {
      G2d = std::move(G2.entries_d);
    } else {
      G2d.resize(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G2d(i, j) = G2.entries->at(i, j).to_std();
    }
    // trace(T G2 T^H) without forming the full product
    double tr = 0.0;
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXcd row = B.transform.row(i).head(i + 1).transpose();
      Eigen::VectorXcd g = G2d.topLeftCorner(i + 1, i + 1) * row;
      tr += (row.adjoint() * g).real()(0);
    }
    return tr;
  }

  if (G2.double_backend) throw OrthoError("bergman_trace: backend mismatch");
  mpfr_prec_t prec = B.precision_bits;
  const MpMatrix& T = *B.transform_mp;
  mp::Real tr(prec);
  mp::Complex acc(prec), cell(prec);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      acc.set_zero();
      for (int mm = 0; mm <= i; ++mm) acc.addmul(T.at(i, mm), G2.entries->at(mm, j));
      cell.set_zero();
      cell.addmul(acc, conj(T.at(i, j)));
      mpfr_add(tr.raw(), tr.raw(), cell.re.raw(), MPFR_RNDN);
    }
  }
  return tr.to_double();
}

GrowthFit growth_fit(const std::vector<std::pair<int, double>>& k_sup, double bound_exponent) {
  if (k_sup.size() < 5)
    throw std::invalid_argument("growth_fit: at least 5 distinct k values required");
  int kmin = k_sup.front().first, kmax = k_sup.front().first;
  for (auto& [k, s] : k_sup) {
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
  }
  if (kmax < 4 * kmin)
    throw std::invalid_argument("growth_fit: k range too narrow (max/min >= 4 required)");

  int n = static_cast<int>(k_sup.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(double(k_sup[i].first));
    y(i) = std::log(k_sup[i].second);
  }
  Eigen::Vector2d beta = (A.transpose() * A).ldlt().solve(A.transpose() * y);
  Eigen::VectorXd resid = y - A * beta;
  double s2 = resid.squaredNorm() / std::max(1, n - 2);
  double sxx = (A.col(1).array() - A.col(1).mean()).square().sum();
  double slope_se = std::sqrt(s2 / sxx);

  GrowthFit fit;
  for (auto& [k, s] : k_sup) {
    fit.ks.push_back(k);
    fit.sups.push_back(s);
  }
  fit.fitted_exponent = beta(1);
  fit.ci_halfwidth = 2.0 * slope_se;
  fit.bound_exponent = bound_exponent;
  fit.pass = fit.fitted_exponent <= bound_exponent + fit.ci_halfwidth;
  return fit;
}

}  // namespace bk
