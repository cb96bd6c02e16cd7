#include "bk/envelopes.hpp"

#include <algorithm>
#include <cmath>

#include "bk/lp.hpp"

namespace bk {

EnvelopeOracle envelope_oracle(const CompactSet& set, const WeightSpec& weight) {
  if (weight.kind != WeightSpec::Kind::zero)
    throw GeometryError("envelope_oracle: no closed form catalogued for weighted pair (" +
                        set.id + ", Q != 0)");
  EnvelopeOracle o;
  o.set_id = set.id;
  if (set.id == "circle") {
    double r = set.patches[0].radius;
    o.formula = "log+|z/r|";
    o.value = [r](const Point2& z) { return std::max(0.0, std::log(std::abs(z(0)) / r)); };
  } else if (set.id == "interval") {
    o.formula = "log|z + sqrt(z^2-1)|";
    o.value = [](const Point2& z) {
      Cplx w = z(0);
      Cplx s = std::sqrt(w * w - 1.0);
      double v = std::abs(w + s);
      if (v < 1.0) v = std::abs(w - s);  // pick the branch outside the unit disk
      return std::max(0.0, std::log(v));
    };
  } else if (set.id == "torus2") {
    o.formula = "max(log+|z1|, log+|z2|)";
    o.value = [](const Point2& z) {
      return std::max({0.0, std::log(std::abs(z(0))), std::log(std::abs(z(1)))});
    };
  } else {
    throw GeometryError("envelope_oracle: uncatalogued pair (" + set.id + ", Q=0)");
  }
  return o;
}

double chebyshev_envelope(const WeightedMeasure& m, int k, const Point2& z,
                          const ChebyshevEnvelopeOptions& opt) {
  const CompactSet& set = m.set;
  int nvars = set.ambient_dim;
  int d = poly_dim(nvars, k);
  int per_dim = opt.constraint_nodes_per_dim > 0 ? opt.constraint_nodes_per_dim : 8 * k;
  int P = std::max(8, opt.phase_count);

  // constraint points on K
  std::vector<Point2> pts;
  std::vector<double> qv;
  for (const Patch& p : set.patches) {
    if (p.param_dim == 1) {
      for (int i = 0; i < per_dim; ++i) {
        double t = p.periodic ? p.lo(0) + (p.hi(0) - p.lo(0)) * i / per_dim
                              : p.lo(0) + (p.hi(0) - p.lo(0)) * i / double(per_dim - 1);
        Eigen::Vector2d tv;
        tv << t, 0.0;
        pts.push_back(p.chart(tv));
        qv.push_back(m.weight.eval(pts.back()));
      }
    } else {
      int g = std::max(8, int(std::ceil(std::sqrt(double(per_dim)))));
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
          Eigen::Vector2d tv;
          tv << p.lo(0) + (p.hi(0) - p.lo(0)) * i / g, p.lo(1) + (p.hi(1) - p.lo(1)) * j / g;
          pts.push_back(p.chart(tv));
          qv.push_back(m.weight.eval(pts.back()));
        }
    }
  }

  int rows = static_cast<int>(pts.size()) * P;
  Eigen::MatrixXd A(rows, 2 * d);
  Eigen::VectorXd b(rows);
  auto mons = monomial_list(nvars, k);
  int r = 0;
  for (size_t j = 0; j < pts.size(); ++j) {
    Eigen::VectorXcd mono(d);
    {
      std::vector<Cplx> pw1(k + 1), pw2(k + 1);
      pw1[0] = pw2[0] = 1.0;
      for (int s = 1; s <= k; ++s) {
        pw1[s] = pw1[s - 1] * pts[j](0);
        pw2[s] = pw2[s - 1] * pts[j](1);
      }
      for (int l = 0; l < d; ++l)
        mono(l) = nvars == 1 ? pw1[mons[l].a] : pw1[mons[l].a] * pw2[mons[l].b];
    }
    double rhs = std::exp(double(k) * qv[j]);
    for (int ph = 0; ph < P; ++ph, ++r) {
      Cplx e = std::polar(1.0, 2.0 * M_PI * ph / P);
      for (int l = 0; l < d; ++l) {
        Cplx em = e * mono(l);
        A(r, l) = em.real();
        A(r, d + l) = -em.imag();
      }
      b(r) = rhs;
    }
  }

  // Objective Re(sigma(z)); the phase-grid symmetry of the constraint set
  // makes the best objective phase attainable at phase 0.
  Eigen::VectorXd c(2 * d);
  {
    std::vector<Cplx> pw1(k + 1), pw2(k + 1);
    pw1[0] = pw2[0] = 1.0;
    for (int s = 1; s <= k; ++s) {
      pw1[s] = pw1[s - 1] * z(0);
      pw2[s] = pw2[s - 1] * z(1);
    }
    for (int l = 0; l < d; ++l) {
      Cplx mono = nvars == 1 ? pw1[mons[l].a] : pw1[mons[l].a] * pw2[mons[l].b];
      c(l) = mono.real();
      c(d + l) = -mono.imag();
    }
  }

  LpResult res = lp_maximize(A, b, c, opt.lp_tol);
  double val = std::max(res.objective, 1e-300);
  return std::log(val) / double(k);
}

std::vector<Point2> ring_grid(const CompactSet& set, int angular) {
  static const double radii[] = {0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 5.0, 10.0};
  std::vector<Point2> pts;
  if (set.ambient_dim == 1) {
    for (double r : radii)
      for (int i = 0; i < angular; ++i) {
        Point2 z;
        z.setZero();
        z(0) = std::polar(r, 2.0 * M_PI * i / angular);
        pts.push_back(z);
      }
  } else {
    int ang = std::max(4, angular / 16);
    for (double r1 : radii)
      for (double r2 : radii)
        for (int i = 0; i < ang; ++i)
          for (int j = 0; j < ang; ++j) {
            Point2 z;
            z(0) = std::polar(r1, 2.0 * M_PI * i / ang);
            z(1) = std::polar(r2, 2.0 * M_PI * j / ang);
            pts.push_back(z);
          }
  }
  return pts;
}

RateSummary convergence_rate(const EnvelopeOracle& oracle,
                             const std::vector<std::pair<int, const OrthoBasis*>>& bases,
                             const WeightedMeasure& m, int angular) {
  auto grid = ring_grid(m.set, angular);
  RateSummary out;
  for (auto [k, basis] : bases) {
    RateRecord rec;
    rec.k = k;
    for (const auto& z : grid) {
      double est = bergman_at(*basis, m, z).log_b_tilde / (2.0 * k);
      rec.e_k = std::max(rec.e_k, std::abs(est - oracle(z)));
    }
    rec.scaled = rec.e_k * k / std::log(double(k));
    out.records.push_back(rec);
  }
  out.max_scaled = 0.0;
  out.min_scaled = std::numeric_limits<double>::infinity();
  for (const auto& r : out.records) {
    out.max_scaled = std::max(out.max_scaled, r.scaled);
    out.min_scaled = std::min(out.min_scaled, r.scaled);
  }
  out.c_fit = out.max_scaled;
  out.bounded = out.max_scaled <= 4.0 * out.min_scaled;
  return out;
}

Poly chebyshev_t(int k) {
  Poly t0 = Poly::constant(1, 1.0);
  if (k == 0) return t0;
  Poly t1(1, 1);
  t1.coeffs(1) = 1.0;
  for (int n = 2; n <= k; ++n) {
    Poly t2(1, n);
    for (int j = 0; j < t1.coeffs.size(); ++j) t2.coeffs(j + 1) += 2.0 * t1.coeffs(j);
    for (int j = 0; j < t0.coeffs.size(); ++j) t2.coeffs(j) -= t0.coeffs(j);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  return t1;
}

namespace {

// T_m(2 z^4 - 1): bounded by 1 on both arms of the right-angle arc union.
Poly arc_union_extremal(int m) {
  Poly u0 = Poly::constant(1, 1.0);
  Poly u1(1, 4);
  u1.coeffs(0) = -1.0;
  u1.coeffs(4) = 2.0;
  if (m == 0) return u0;
  Poly prev = u0, cur = u1;
  for (int n = 2; n <= m; ++n) {
    Poly next(1, 4 * n);
    // next = 2 * u1 * cur - prev
    for (int i = 0; i < u1.coeffs.size(); ++i) {
      if (u1.coeffs(i) == 0.0) continue;
      for (int j = 0; j < cur.coeffs.size(); ++j)
        next.coeffs(i + j) += 2.0 * u1.coeffs(i) * cur.coeffs(j);
    }
    for (int j = 0; j < prev.coeffs.size(); ++j) next.coeffs(j) -= prev.coeffs(j);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

MarkovResult markov_factor(const CompactSet& set, int k, int trials, std::uint64_t seed) {
  // evaluation grid on K: Chebyshev-spaced with endpoints on segments,
  // uniform on periodic patches
  std::vector<Point2> grid;
  int n = 16 * k + 1;
  for (const Patch& p : set.patches) {
    for (int i = 0; i < n; ++i) {
      double t;
      if (p.periodic)
        t = p.lo(0) + (p.hi(0) - p.lo(0)) * i / n;
      else {
        double u = std::cos(M_PI * i / (n - 1));  // [-1, 1], endpoints included
        t = p.lo(0) + (p.hi(0) - p.lo(0)) * 0.5 * (1.0 - u);
      }
      Eigen::Vector2d tv;
      tv << t, 0.0;
      grid.push_back(p.chart(tv));
    }
  }

  auto ratio = [&](const Poly& p) {
    Poly dp = derivative(p, 0);
    double sup = 0.0, dsup = 0.0;
    for (const auto& z : grid) {
      sup = std::max(sup, std::abs(eval(p, z)));
      dsup = std::max(dsup, std::abs(eval(dp, z)));
    }
    return sup > 0 ? dsup / sup : 0.0;
  };

  double factor = 0.0;

  // catalog extremals
  if (set.id == "circle") {
    Poly zk(1, k);
    zk.coeffs(k) = 1.0;
    factor = std::max(factor, ratio(zk));
  } else if (set.id == "interval") {
    // T_k via cos(k theta): its monomial form is unusable in double beyond
    // k ~ 50, the trig form is stable at any degree
    double sup = 0.0, dsup = 0.0;
    for (int i = 0; i < n; ++i) {
      double th = M_PI * i / (n - 1);
      sup = std::max(sup, std::abs(std::cos(k * th)));
      double s = std::sin(th);
      double d = s > 1e-9 ? k * std::sin(k * th) / s : double(k) * k;
      dsup = std::max(dsup, std::abs(d));
    }
    factor = std::max(factor, dsup / sup);
  } else if (set.id == "arc_union" && k % 4 == 0 && k >= 4) {
    factor = std::max(factor, ratio(arc_union_extremal(k / 4)));
  }

  CounterRng rng(seed, 0x6d61726b6f76ull);
  for (int t = 0; t < trials; ++t) {
    Poly p(1, k);
    for (int j = 0; j <= k; ++j) p.coeffs(j) = rng.next_gaussian();
    factor = std::max(factor, ratio(p));
  }

  MarkovResult out;
  out.factor = factor;
  out.factor_over_k = factor / k;
  out.factor_over_k2 = factor / double(k) / double(k);
  return out;
}

}  // namespace bk
