#include "bk/ortho.hpp"

#include <algorithm>
#include <cmath>

namespace bk {

namespace {

WeightedMeasure ensure_order(const WeightedMeasure& m, int k) {
  int need = 4 * k + 16;
  if (m.quad_order >= need) return m;
  return build_measure(m.set, m.density, m.weight, need);
}

// Combined positive node factor leb_w * rho * e^{-2kQ} at precision.
void node_factor(const WeightedMeasure::Node& nd, int k, mp::Real& out) {
  out.set(nd.leb_w * nd.rho);
  if (nd.q != 0.0) {
    mp::Real e(out.prec());
    e.set(-2.0 * k * nd.q);
    mpfr_exp(e.raw(), e.raw(), MPFR_RNDN);
    out *= e;
  }
}

// sum over nodes of factor * e^{i m theta}, m = 0..mmax (theta = param(0)).
std::vector<mp::Complex> phase_sums(const std::vector<WeightedMeasure::Node>& nodes,
                                    int k, int mmax, mpfr_prec_t prec) {
  std::vector<mp::Complex> t(mmax + 1, mp::Complex(prec));
  mp::Real w(prec);
  mp::Complex e(prec), u(prec), tmp(prec);
  for (const auto& nd : nodes) {
    node_factor(nd, k, w);
    mp::Real th(nd.param(0), prec);
    sin_cos(e.im, e.re, th);
    u.set(std::complex<double>(1.0, 0.0));
    for (int m = 0; m <= mmax; ++m) {
      mpfr_mul(tmp.re.raw(), u.re.raw(), w.raw(), MPFR_RNDN);
      mpfr_add(t[m].re.raw(), t[m].re.raw(), tmp.re.raw(), MPFR_RNDN);
      mpfr_mul(tmp.re.raw(), u.im.raw(), w.raw(), MPFR_RNDN);
      mpfr_add(t[m].im.raw(), t[m].im.raw(), tmp.re.raw(), MPFR_RNDN);
      tmp.set_zero();
      tmp.addmul(u, e);
      u.set(tmp);
    }
  }
  return t;
}

// real power sums over real nodes: mu_m = sum factor * x^m, m = 0..mmax.
std::vector<mp::Real> real_moments(const std::vector<WeightedMeasure::Node>& nodes,
                                   int k, int mmax, mpfr_prec_t prec) {
  std::vector<mp::Real> mu(mmax + 1, mp::Real(prec));
  mp::Real w(prec), x(prec), p(prec), t(prec);
  for (const auto& nd : nodes) {
    node_factor(nd, k, w);
    x.set(nd.z(0).real());
    p.set(1.0);
    for (int m = 0; m <= mmax; ++m) {
      mpfr_mul(t.raw(), p.raw(), w.raw(), MPFR_RNDN);
      mpfr_add(mu[m].raw(), mu[m].raw(), t.raw(), MPFR_RNDN);
      mpfr_mul(p.raw(), p.raw(), x.raw(), MPFR_RNDN);
    }
  }
  return mu;
}

bool all_nodes_real(const WeightedMeasure& m) {
  for (const auto& nd : m.nodes)
    if (std::abs(nd.z(0).imag()) > 1e-14) return false;
  return true;
}

enum class Path { moments, toeplitz, separable, generic };

Path choose_path(const WeightedMeasure& m, int nvars) {
  if (nvars == 2) {
    if (m.set.id == "torus2" && m.density.kind == DensitySpec::Kind::constant &&
        m.weight.kind == WeightSpec::Kind::zero)
      return Path::separable;
    return Path::generic;
  }
  if (m.set.id == "circle") return Path::toeplitz;
  if (all_nodes_real(m)) return Path::moments;
  return Path::generic;
}

template <typename Fill>
void fill_gram(GramMatrix& G, int d, Fill&& fill) {
  // fill(i, j, target mp::Complex&) for i >= j; Hermitian mirror.
  if (G.double_backend) {
    G.entries_d.resize(d, d);
    mp::Complex tmp(64);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        fill(i, j, tmp);
        G.entries_d(i, j) = tmp.to_std();
        G.entries_d(j, i) = std::conj(G.entries_d(i, j));
      }
  } else {
    G.entries = std::make_shared<MpMatrix>(d, G.precision_bits);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j) {
        fill(i, j, G.entries->at(i, j));
        G.entries->at(j, i) = conj(G.entries->at(i, j));
      }
  }
}

}  // namespace

int suggest_precision_bits(const std::string& set_id, int k, int requested) {
  int bits = std::max(requested, 64);
  if (set_id == "interval" || set_id == "arc_union") {
    // monomial moment-matrix conditioning grows exponentially in k
    int need = 64 * ((int(2.8 * k) + 256 + 63) / 64);
    bits = std::max(bits, need);
  } else if (set_id == "jordan_curve") {
    int need = 64 * ((int(1.0 * k) + 192 + 63) / 64);
    bits = std::max(bits, need);
  }
  return bits;
}

GramMatrix gram(const WeightedMeasure& m_in, int k, int precision_bits) {
  if (precision_bits < 64) throw OrthoError("gram: precision_bits >= 64 required");
  WeightedMeasure scratch;
  const WeightedMeasure* mp_measure = &m_in;
  if (m_in.quad_order < 4 * k + 16) {
    scratch = ensure_order(m_in, k);
    mp_measure = &scratch;
  }
  const WeightedMeasure& m = *mp_measure;
  int nvars = m.set.ambient_dim;
  int d = poly_dim(nvars, k);
  mpfr_prec_t prec = precision_bits;

  GramMatrix G;
  G.k = k;
  G.nvars = nvars;
  G.precision_bits = precision_bits;
  G.double_backend = (precision_bits <= 64) && choose_path(m, nvars) != Path::generic;
  G.assembly_node_count = static_cast<int>(m.nodes.size());

  switch (choose_path(m, nvars)) {
    case Path::moments: {
      auto mu = real_moments(m.nodes, k, 2 * k, prec);
      fill_gram(G, d, [&](int i, int j, mp::Complex& out) {
        out.re.set(mu[i + j]);
        out.im.set_zero();
      });
      break;
    }
    case Path::toeplitz: {
      auto t = phase_sums(m.nodes, k, 2 * k, prec);
      double radius = m.set.patches[0].radius;
      std::vector<mp::Real> rp(2 * k + 1, mp::Real(prec));
      rp[0].set(1.0);
      for (int s = 1; s <= 2 * k; ++s) {
        rp[s].set(rp[s - 1]);
        rp[s] *= mp::Real(radius, prec);
      }
      fill_gram(G, d, [&](int i, int j, mp::Complex& out) {
        // G_ij = r^{i+j} t_{i-j}  (i >= j)
        out.set(t[i - j]);
        out.scale(rp[i + j]);
      });
      break;
    }
    case Path::separable: {
      // torus with constant density, Q = 0: split the tensor nodes back
      // into the two axis rules via the stored recipes.
      const auto& recs = m.recipes[0];
      Rule1d r0 = trapezoid_periodic(recs[0].n, recs[0].a, recs[0].b);
      Rule1d r1 = trapezoid_periodic(recs[1].n, recs[1].a, recs[1].b);
      double rho = m.density.constant;
      auto axis_sums = [&](const Rule1d& r, double scale) {
        std::vector<mp::Complex> t(2 * k + 1, mp::Complex(prec));
        mp::Real w(prec);
        mp::Complex e(prec), u(prec), tmp(prec);
        for (int i = 0; i < r.nodes.size(); ++i) {
          w.set(r.weights(i) * scale);
          mp::Real th(r.nodes(i), prec);
          sin_cos(e.im, e.re, th);
          u.set(std::complex<double>(1.0, 0.0));
          for (int mm = 0; mm <= 2 * k; ++mm) {
            mpfr_mul(tmp.re.raw(), u.re.raw(), w.raw(), MPFR_RNDN);
            mpfr_add(t[mm].re.raw(), t[mm].re.raw(), tmp.re.raw(), MPFR_RNDN);
            mpfr_mul(tmp.re.raw(), u.im.raw(), w.raw(), MPFR_RNDN);
            mpfr_add(t[mm].im.raw(), t[mm].im.raw(), tmp.re.raw(), MPFR_RNDN);
            tmp.set_zero();
            tmp.addmul(u, e);
            u.set(tmp);
          }
        }
        return t;
      };
      auto t1 = axis_sums(r0, rho);
      auto t2 = axis_sums(r1, 1.0);
      auto mons = monomial_list(2, k);
      fill_gram(G, d, [&](int i, int j, mp::Complex& out) {
        int da = mons[i].a - mons[j].a;
        int db = mons[i].b - mons[j].b;
        const mp::Complex& a = t1[std::abs(da)];
        const mp::Complex& b = t2[std::abs(db)];
        mp::Complex aa = da >= 0 ? a : conj(a);
        mp::Complex bb = db >= 0 ? b : conj(b);
        out.set_zero();
        out.addmul(aa, bb);
      });
      break;
    }
    case Path::generic: {
      G.double_backend = false;
      G.entries = std::make_shared<MpMatrix>(d, prec);
      auto mons = monomial_list(nvars, k);
      std::vector<mp::Complex> pw1(k + 1, mp::Complex(prec)), pw2(k + 1, mp::Complex(prec));
      std::vector<mp::Complex> mono(d, mp::Complex(prec));
      mp::Real w(prec);
      mp::Complex wm(prec), tmp(prec);
      for (const auto& nd : m.nodes) {
        node_factor(nd, k, w);
        pw1[0].set(std::complex<double>(1.0, 0.0));
        pw2[0].set(std::complex<double>(1.0, 0.0));
        mp::Complex z1(nd.z(0), prec), z2(nd.z(1), prec);
        for (int s = 1; s <= k; ++s) {
          tmp.set_zero(); tmp.addmul(pw1[s - 1], z1); pw1[s].set(tmp);
          tmp.set_zero(); tmp.addmul(pw2[s - 1], z2); pw2[s].set(tmp);
        }
        for (int i = 0; i < d; ++i) {
          if (nvars == 1) {
            mono[i].set(pw1[mons[i].a]);
          } else {
            mono[i].set_zero();
            mono[i].addmul(pw1[mons[i].a], pw2[mons[i].b]);
          }
        }
        for (int i = 0; i < d; ++i) {
          wm.set(mono[i]);
          wm.scale(w);
          for (int j = 0; j <= i; ++j) {
            // G_ij += w * mono_i * conj(mono_j)
            G.entries->at(i, j).submul_conj(wm, mono[j]);  // subtract then flip
          }
        }
      }
      // submul_conj accumulates the negative; flip signs once.
      for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
          auto& e = G.entries->at(i, j);
          mpfr_neg(e.re.raw(), e.re.raw(), MPFR_RNDN);
          mpfr_neg(e.im.raw(), e.im.raw(), MPFR_RNDN);
          G.entries->at(j, i) = conj(e);
        }
      break;
    }
  }

  // quadrature sanity: Gram diagonal must be strictly positive
  for (int i = 0; i < d; ++i) {
    bool bad = G.double_backend ? !(G.entries_d(i, i).real() > 0.0)
                                : !(G.entries->at(i, i).re.sign() > 0);
    if (bad) throw OrthoError("gram: non-positive diagonal entry (quadrature failure)", i);
  }
  return G;
}

OrthoBasis orthonormalize(const GramMatrix& G) {
  int d = G.double_backend ? int(G.entries_d.rows()) : G.entries->dim();
  OrthoBasis B;
  B.k = G.k;
  B.nvars = G.nvars;
  B.precision_bits = G.precision_bits;

  if (G.double_backend) {
    Eigen::LLT<Eigen::MatrixXcd> llt(G.entries_d);
    if (llt.info() != Eigen::Success)
      throw OrthoError("orthonormalize: Cholesky breakdown (double backend); "
                       "retry with higher precision_bits");
    Eigen::MatrixXcd L = llt.matrixL();
    double dmin = L.diagonal().real().minCoeff();
    double dmax = L.diagonal().real().maxCoeff();
    if (!(dmin > 0))
      throw OrthoError("orthonormalize: non-positive pivot (double backend); "
                       "retry with higher precision_bits");
    B.transform = L.triangularView<Eigen::Lower>()
                      .solve(Eigen::MatrixXcd::Identity(d, d));
    B.cond_estimate = (dmax / dmin) * (dmax / dmin);
    B.log10_cond = 2.0 * std::log10(dmax / dmin);
    B.double_safe = true;
    return B;
  }

  mpfr_prec_t prec = G.precision_bits;
  MpMatrix L(d, prec);
  mp::Real s(prec), t(prec);
  for (int j = 0; j < d; ++j) {
    s.set(G.entries->at(j, j).re);
    for (int m = 0; m < j; ++m) {
      mpfr_sqr(t.raw(), L.at(j, m).re.raw(), MPFR_RNDN);
      mpfr_sub(s.raw(), s.raw(), t.raw(), MPFR_RNDN);
      mpfr_sqr(t.raw(), L.at(j, m).im.raw(), MPFR_RNDN);
      mpfr_sub(s.raw(), s.raw(), t.raw(), MPFR_RNDN);
    }
    if (!(s.sign() > 0))
      throw OrthoError("orthonormalize: pivot breakdown at index " + std::to_string(j) +
                           "; suggest doubling precision_bits",
                       j);
    mpfr_sqrt(L.at(j, j).re.raw(), s.raw(), MPFR_RNDN);
    for (int i = j + 1; i < d; ++i) {
      mp::Complex& c = L.at(i, j);
      c.set(G.entries->at(i, j));
      for (int m = 0; m < j; ++m) c.submul_conj(L.at(i, m), L.at(j, m));
      c.div_real(L.at(j, j).re);
    }
  }

  // T = L^{-1} by forward substitution (T lower triangular).
  auto T = std::make_shared<MpMatrix>(d, prec);
  mp::Complex acc(prec);
  for (int i = 0; i < d; ++i) {
    mpfr_ui_div(T->at(i, i).re.raw(), 1, L.at(i, i).re.raw(), MPFR_RNDN);
    for (int j = i - 1; j >= 0; --j) {
      acc.set_zero();
      for (int m = j; m < i; ++m) acc.addmul(L.at(i, m), T->at(m, j));
      // T_ij = -acc / L_ii
      mpfr_neg(acc.re.raw(), acc.re.raw(), MPFR_RNDN);
      mpfr_neg(acc.im.raw(), acc.im.raw(), MPFR_RNDN);
      acc.div_real(L.at(i, i).re);
      T->at(i, j).set(acc);
    }
  }

  double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0;
  double log_lmin = 0, log_lmax = 0;
  for (int j = 0; j < d; ++j) {
    double v = L.at(j, j).re.to_double();
    long ex = 0;
    double mant = mpfr_get_d_2exp(&ex, L.at(j, j).re.raw(), MPFR_RNDN);
    double lg = std::log10(std::abs(mant)) + ex * std::log10(2.0);
    if (j == 0 || lg < log_lmin) log_lmin = lg;
    if (j == 0 || lg > log_lmax) log_lmax = lg;
    lmin = std::min(lmin, v);
    lmax = std::max(lmax, v);
  }
  B.log10_cond = 2.0 * (log_lmax - log_lmin);
  B.cond_estimate = B.log10_cond < 300 ? std::pow(10.0, B.log10_cond)
                                       : std::numeric_limits<double>::infinity();
  B.transform_mp = T;

  // double down-convert; flag overflow so evaluation stays on the mp path
  B.transform.resize(d, d);
  B.double_safe = B.log10_cond < 12.0;
  for (int i = 0; i < d && B.double_safe; ++i)
    for (int j = 0; j <= i; ++j) {
      std::complex<double> v = T->at(i, j).to_std();
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        B.double_safe = false;
        break;
      }
    }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B.transform(i, j) = j <= i ? T->at(i, j).to_std() : 0.0;
  return B;
}

double verify_orthonormality(const OrthoBasis& B, const WeightedMeasure& m, int k) {
  WeightedMeasure m2 = build_measure(m.set, m.density, m.weight,
                                     std::max(2 * m.quad_order, 2 * (4 * k + 16)));
  GramMatrix G2 = gram(m2, k, B.precision_bits);
  int d = poly_dim(B.nvars, k);

  if (!B.transform_mp) {
    // double-backend basis
    Eigen::MatrixXcd G2d;
    if (G2.double_backend) {
      G2d = G2.entries_d;
    } else {
      G2d.resize(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G2d(i, j) = G2.entries->at(i, j).to_std();
    }
    Eigen::MatrixXcd R = B.transform * G2d * B.transform.adjoint();
    R -= Eigen::MatrixXcd::Identity(d, d);
    return R.cwiseAbs().maxCoeff();
  }

  // mp path: R = T G2 T^*
  mpfr_prec_t prec = B.precision_bits;
  const MpMatrix& T = *B.transform_mp;
  if (G2.double_backend) throw OrthoError("verify_orthonormality: backend mismatch");
  // M = T * G2  (T lower triangular)
  MpMatrix M(d, prec);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      mp::Complex& c = M.at(i, j);
      c.set_zero();
      for (int m = 0; m <= i; ++m) c.addmul(T.at(i, m), G2.entries->at(m, j));
    }
  double worst = 0.0;
  mp::Complex acc(prec);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      acc.set_zero();
      for (int m = 0; m <= j; ++m) acc.addmul(M.at(i, m), conj(T.at(j, m)));
      if (i == j) mpfr_sub_ui(acc.re.raw(), acc.re.raw(), 1, MPFR_RNDN);
      worst = std::max(worst, acc.abs().to_double());
    }
  return worst;
}

OrthoBasis build_basis(const WeightedMeasure& m, int k, int precision_bits, int max_bits) {
  int bits = precision_bits;
  while (true) {
    try {
      GramMatrix G = gram(m, k, bits);
      return orthonormalize(G);
    } catch (const OrthoError&) {
      if (2 * bits > max_bits) throw;
      bits = std::max(2 * bits, 128);
    }
  }
}

}  // namespace bk
