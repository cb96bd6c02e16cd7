#include "bk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bk {

namespace {

// Legendre P_n and derivative at x by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) { p = 1.0; dp = 0.0; return; }
  for (int j = 2; j <= n; ++j) {
    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

Rule1d gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  Rule1d r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Tricomi initial guess, then Newton.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(n, x, p, dp);
    r.nodes(i) = x;
    r.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // ascending order
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return r.nodes(a) < r.nodes(b); });
  Rule1d s;
  s.nodes.resize(n);
  s.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    s.nodes(i) = r.nodes(idx[i]);
    s.weights(i) = r.weights(idx[i]);
  }
  return s;
}

Rule1d map_rule(const Rule1d& r, double lo, double hi) {
  Rule1d s;
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  s.nodes = (r.nodes.array() * half + mid).matrix();
  s.weights = r.weights * half;
  return s;
}

Rule1d trapezoid_periodic(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("trapezoid_periodic: n >= 1 required");
  Rule1d r;
  r.nodes.resize(n);
  r.weights.resize(n);
  double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    r.nodes(i) = a + i * h;
    r.weights(i) = h;
  }
  return r;
}

void gauss_legendre_mp(int n, mpfr_prec_t prec,
                       std::vector<mp::Real>& nodes, std::vector<mp::Real>& weights) {
  Rule1d seed = gauss_legendre(n);
  nodes.clear();
  weights.clear();
  nodes.reserve(n);
  weights.reserve(n);

  mp::Real p0(prec), p1(prec), p2(prec), dp(prec), t(prec), x(prec), dx(prec);
  // Newton converges quadratically from the double seed; a handful of
  // iterations reaches any practical precision.
  int newton_iters = 3 + int(std::log2(double(prec) / 50.0) + 1);
  for (int i = 0; i < n; ++i) {
    x.set(seed.nodes(i));
    for (int it = 0; it < newton_iters; ++it) {
      // recurrence for P_n, P_n'
      p0.set(1.0);
      p1.set(x);
      for (int j = 2; j <= n; ++j) {
        // p2 = ((2j-1) x p1 - (j-1) p0) / j
        mpfr_mul(p2.raw(), x.raw(), p1.raw(), MPFR_RNDN);
        mpfr_mul_d(p2.raw(), p2.raw(), 2.0 * j - 1.0, MPFR_RNDN);
        mpfr_mul_d(t.raw(), p0.raw(), double(j - 1), MPFR_RNDN);
        mpfr_sub(p2.raw(), p2.raw(), t.raw(), MPFR_RNDN);
        mpfr_div_ui(p2.raw(), p2.raw(), j, MPFR_RNDN);
        p0.set(p1);
        p1.set(p2);
      }
      // dp = n (x p1 - p0) / (x^2 - 1)
      mpfr_mul(dp.raw(), x.raw(), p1.raw(), MPFR_RNDN);
      mpfr_sub(dp.raw(), dp.raw(), p0.raw(), MPFR_RNDN);
      mpfr_mul_ui(dp.raw(), dp.raw(), n, MPFR_RNDN);
      mpfr_sqr(t.raw(), x.raw(), MPFR_RNDN);
      mpfr_sub_ui(t.raw(), t.raw(), 1, MPFR_RNDN);
      mpfr_div(dp.raw(), dp.raw(), t.raw(), MPFR_RNDN);
      // x -= p1 / dp
      mpfr_div(dx.raw(), p1.raw(), dp.raw(), MPFR_RNDN);
      mpfr_sub(x.raw(), x.raw(), dx.raw(), MPFR_RNDN);
    }
    // weight = 2 / ((1 - x^2) dp^2), with dp recomputed at the final x by
    // one more recurrence pass.
    p0.set(1.0);
    p1.set(x);
    for (int j = 2; j <= n; ++j) {
      mpfr_mul(p2.raw(), x.raw(), p1.raw(), MPFR_RNDN);
      mpfr_mul_d(p2.raw(), p2.raw(), 2.0 * j - 1.0, MPFR_RNDN);
      mpfr_mul_d(t.raw(), p0.raw(), double(j - 1), MPFR_RNDN);
      mpfr_sub(p2.raw(), p2.raw(), t.raw(), MPFR_RNDN);
      mpfr_div_ui(p2.raw(), p2.raw(), j, MPFR_RNDN);
      p0.set(p1);
      p1.set(p2);
    }
    mpfr_mul(dp.raw(), x.raw(), p1.raw(), MPFR_RNDN);
    mpfr_sub(dp.raw(), dp.raw(), p0.raw(), MPFR_RNDN);
    mpfr_mul_ui(dp.raw(), dp.raw(), n, MPFR_RNDN);
    mpfr_sqr(t.raw(), x.raw(), MPFR_RNDN);
    mpfr_sub_ui(t.raw(), t.raw(), 1, MPFR_RNDN);
    mpfr_div(dp.raw(), dp.raw(), t.raw(), MPFR_RNDN);

    mp::Real w(prec);
    mpfr_sqr(w.raw(), dp.raw(), MPFR_RNDN);
    mpfr_sqr(t.raw(), x.raw(), MPFR_RNDN);
    mpfr_ui_sub(t.raw(), 1, t.raw(), MPFR_RNDN);
    mpfr_mul(w.raw(), w.raw(), t.raw(), MPFR_RNDN);
    mpfr_ui_div(w.raw(), 2, w.raw(), MPFR_RNDN);

    nodes.push_back(x);
    weights.push_back(w);
  }
}

std::vector<std::pair<double, double>> graded_panels(double a, double b,
                                                     std::vector<double> singular,
                                                     int base_panels, int levels) {
  if (!(b > a)) throw std::invalid_argument("graded_panels: empty interval");
  std::sort(singular.begin(), singular.end());
  std::vector<double> brk = {a};
  for (double s : singular)
    if (s > a && s < b) brk.push_back(s);
  brk.push_back(b);

  auto is_singular = [&](double x) {
    for (double s : singular)
      if (std::abs(x - s) < 1e-14 * std::max(1.0, std::abs(b - a))) return true;
    return false;
  };

  std::vector<std::pair<double, double>> panels;
  double total = b - a;
  for (size_t seg = 0; seg + 1 < brk.size(); ++seg) {
    double u = brk[seg], v = brk[seg + 1];
    int m = std::max(2, int(std::ceil(base_panels * (v - u) / total)));
    double h = (v - u) / m;
    bool su = is_singular(u), sv = is_singular(v);
    double lo = su ? u + h : u;
    double hi = sv ? v - h : v;
    // deep levels underflow to zero width in double; the uncovered sliver
    // next to the singularity carries negligible (integrable) mass
    auto push = [&](double p1, double p2) {
      // keep panels wide enough that their interior Gauss nodes stay
      // distinct from the endpoints in double
      if (p2 - p1 > 1e-13 * std::max({1.0, std::abs(p1), std::abs(p2)}))
        panels.emplace_back(p1, p2);
    };
    if (su) {
      // graded toward u: [u + h 2^{-j-1}, u + h 2^{-j}]
      for (int j = levels - 1; j >= 0; --j)
        push(u + h * std::ldexp(1.0, -j - 1), u + h * std::ldexp(1.0, -j));
    }
    int inner = std::max(1, m - (su ? 1 : 0) - (sv ? 1 : 0));
    double ih = (hi - lo) / inner;
    for (int i = 0; i < inner; ++i) push(lo + i * ih, lo + (i + 1) * ih);
    if (sv) {
      for (int j = 0; j < levels; ++j)
        push(v - h * std::ldexp(1.0, -j), v - h * std::ldexp(1.0, -j - 1));
    }
  }
  return panels;
}

Rule1d composite_gl(const std::vector<std::pair<double, double>>& panels, int q) {
  Rule1d base = gauss_legendre(q);
  int n = q * static_cast<int>(panels.size());
  Rule1d out;
  out.nodes.resize(n);
  out.weights.resize(n);
  int pos = 0;
  for (auto [lo, hi] : panels) {
    Rule1d m = map_rule(base, lo, hi);
    out.nodes.segment(pos, q) = m.nodes;
    out.weights.segment(pos, q) = m.weights;
    pos += q;
  }
  return out;
}

}  // namespace bk
