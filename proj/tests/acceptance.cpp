// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "bk/envelopes.hpp"
#include "bk/kernels.hpp"
#include "bk/ortho.hpp"
#include "bk/randomzeros.hpp"

using namespace bk;

namespace {

int g_failures = 0;

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void line(int idx, const std::string& name, bool pass, const std::string& detail, double secs) {
  std::printf("%s criterion %2d (%s): %s [%.1fs]\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

WeightedMeasure haar_circle(int order) {
  SetSpec s;
  s.tag = "circle";
  DensitySpec d;
  d.constant = 1.0 / (2.0 * M_PI);
  return build_measure(build_set(s), d, {}, order);
}

WeightedMeasure haar_torus(int order) {
  SetSpec s;
  s.tag = "torus2";
  DensitySpec d;
  d.constant = 1.0 / (4.0 * M_PI * M_PI);
  return build_measure(build_set(s), d, {}, order);
}

WeightedMeasure lebesgue_interval(int order) {
  SetSpec s;
  s.tag = "interval";
  return build_measure(build_set(s), {}, {}, order);
}

Point2 pt1(Cplx a) {
  Point2 z;
  z.setZero();
  z(0) = a;
  return z;
}

// least-squares slope of log y against log x
double loglog_slope(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = double(xy.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

// --- 1. circle exactness: B_k == k+1, fitted growth exponent 1.00 +- 0.03
void criterion1() {
  double t0 = now();
  std::vector<int> ks{16, 32, 64, 128, 256};
  WeightedMeasure m = haar_circle(4 * 256 + 16);
  double worst_rel = 0.0;
  std::vector<std::pair<int, double>> k_sup;
  for (int k : ks) {
    OrthoBasis B = build_basis(m, k, 64);
    for (int i = 0; i < 16; ++i) {
      double v = bergman_at(B, m, pt1(std::polar(1.0, 2.0 * M_PI * i / 16.0))).b_k;
      worst_rel = std::max(worst_rel, std::abs(v - (k + 1.0)) / (k + 1.0));
    }
    k_sup.emplace_back(k, sup_bergman(B, m));
  }
  GrowthFit fit = growth_fit(k_sup, 1.0);
  bool pass = worst_rel < 1e-8 && std::abs(fit.fitted_exponent - 1.0) <= 0.03;
  line(1, "circle exactness B_k = k+1", pass,
       fmt("max rel err %.2e, fitted exponent %.4f", worst_rel, fit.fitted_exponent), now() - t0);
}

// --- 2. torus C^2: B_k == (k+1)(k+2)/2, fitted exponent 2.00 +- 0.06
void criterion2() {
  double t0 = now();
  std::vector<int> ks{8, 12, 16, 24, 32, 48};
  double worst_rel = 0.0;
  std::vector<std::pair<double, double>> k_sup;
  for (int k : ks) {
    WeightedMeasure m = haar_torus(4 * k + 16);
    OrthoBasis B = build_basis(m, k, 64);
    double want = 0.5 * (k + 1.0) * (k + 2.0);
    double sup = 0.0;
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        Point2 z;
        z << std::polar(1.0, 2.0 * M_PI * i / 7.0), std::polar(1.0, 2.0 * M_PI * j / 7.0 + 0.3);
        double v = bergman_at(B, m, z).b_k;
        worst_rel = std::max(worst_rel, std::abs(v - want) / want);
        sup = std::max(sup, v);
      }
    // the quadratic (k+1)(k+2)/2 = (k+1.5)^2/2 + O(1) reads off cleanly
    // against the shifted abscissa even at moderate k
    k_sup.emplace_back(k + 1.5, sup);
  }
  double slope = loglog_slope(k_sup);
  bool pass = worst_rel < 1e-6 && std::abs(slope - 2.0) <= 0.06;
  line(2, "torus B_k = (k+1)(k+2)/2", pass,
       fmt("max rel err %.2e, fitted exponent %.4f", worst_rel, slope), now() - t0);
}

// --- 3. interval endpoint (k+1)^2/2 at k=200; interior exponent 1.00 +- 0.05
void criterion3() {
  double t0 = now();
  WeightedMeasure m = lebesgue_interval(4 * 400 + 16);
  std::vector<std::pair<int, double>> k_interior;
  double endpoint_ratio = 0.0;
  for (int k : {25, 50, 100, 200, 400}) {
    OrthoBasis B = build_basis(m, k, suggest_precision_bits("interval", k, 0));
    k_interior.emplace_back(k, bergman_at(B, m, pt1(0.0)).b_k);
    if (k == 200)
      endpoint_ratio = bergman_at(B, m, pt1(1.0)).b_k / (0.5 * 201.0 * 201.0);
  }
  GrowthFit fit = growth_fit(k_interior, 1.0);
  bool pass = endpoint_ratio >= 0.999 && endpoint_ratio <= 1.001 &&
              std::abs(fit.fitted_exponent - 1.0) <= 0.05;
  line(3, "interval endpoint/interior split", pass,
       fmt("B_200(1)/((k+1)^2/2) = %.6f, interior exponent %.4f", endpoint_ratio,
           fit.fitted_exponent),
       now() - t0);
}

// --- 4. Danka-Totik: rho = |z-1|^alpha, B_k(1) ~ k^{1+alpha} +- 0.2 at 256 bits
void criterion4() {
  double t0 = now();
  bool pass = true;
  std::string detail;
  for (double alpha : {0.5, 1.0}) {
    SetSpec s;
    s.tag = "circle";
    DensitySpec d;
    d.kind = DensitySpec::Kind::singular;
    d.constant = 1.0 / (2.0 * M_PI);
    d.z0 = 1.0;
    d.exponent = alpha;
    d.lambda = 0.9;
    std::vector<std::pair<int, double>> k_pinned;
    for (int k : {16, 32, 64, 128, 256}) {
      WeightedMeasure m = build_measure(build_set(s), d, {}, 4 * k + 16);
      OrthoBasis B = build_basis(m, k, 256);
      k_pinned.emplace_back(k, bergman_at(B, m, pt1(1.0)).b_k);
    }
    GrowthFit fit = growth_fit(k_pinned, 1.0 + alpha);
    if (std::abs(fit.fitted_exponent - (1.0 + alpha)) > 0.2) pass = false;
    detail += fmt("alpha=%.1f: exponent %.3f  ", alpha, fit.fitted_exponent);
  }
  line(4, "Danka-Totik pinned growth k^{1+alpha}", pass, detail, now() - t0);
}

// --- 5. rough-density sup bound: rho = |z-1|^4, exponent <= 2(l+1)/(a l) = 10.44
void criterion5() {
  double t0 = now();
  SetSpec s;
  s.tag = "circle";
  DensitySpec d;
  d.kind = DensitySpec::Kind::singular;
  d.constant = 1.0 / (2.0 * M_PI);
  d.z0 = 1.0;
  d.exponent = 4.0;
  d.lambda = 0.24;
  const double alpha = 0.99;
  const double bound = 2.0 * (d.lambda + 1.0) / (alpha * d.lambda);
  std::vector<std::pair<int, double>> k_sup;
  for (int k : {16, 24, 32, 64, 128}) {
    WeightedMeasure m = build_measure(build_set(s), d, {}, 4 * k + 16);
    OrthoBasis B = build_basis(m, k, 256);
    k_sup.emplace_back(k, sup_bergman(B, m));
  }
  GrowthFit fit = growth_fit(k_sup, bound);
  bool pass = fit.fitted_exponent <= bound && fit.fitted_exponent < bound - 1.0;
  line(5, "rough-density sup growth bound", pass,
       fmt("measured exponent %.3f, bound %.2f (not tight)", fit.fitted_exponent, bound),
       now() - t0);
}

// --- 6. rate: e_k * k / log k bounded (ratio <= 4), value ~0.5 on |z|=1 at k=256
void criterion6() {
  double t0 = now();
  WeightedMeasure m = haar_circle(4 * 256 + 16);
  EnvelopeOracle V = envelope_oracle(m.set, {});
  std::vector<int> ks{32, 64, 128, 256};
  std::vector<OrthoBasis> bases;
  for (int k : ks) bases.push_back(build_basis(m, k, 64));
  // the ambient diagnostic rings reach |z| = 10, where |z|^{2k} overflows
  // double beyond k = 128; the k = 256 basis is used on the set itself only
  std::vector<std::pair<int, const OrthoBasis*>> refs;
  for (size_t i = 0; i + 1 < ks.size(); ++i) refs.emplace_back(ks[i], &bases[i]);
  RateSummary rate = convergence_rate(V, refs, m);

  double e256 = bergman_at(bases.back(), m, pt1(std::polar(1.0, 0.4))).log_b_tilde / (2.0 * 256.0);
  double scaled256 = e256 * 256.0 / std::log(256.0);
  bool pass = rate.bounded && std::abs(scaled256 - 0.5) <= 0.05;
  line(6, "rate e_k <= C log k / k", pass,
       fmt("scaled ratio %.2f (<=4), |z|=1 value %.4f (0.5 +- 10%%)",
           rate.max_scaled / rate.min_scaled, scaled256),
       now() - t0);
}

// --- 7. envelope approximant: monotone in k, gap at z=2 <= 0.2/k + 0.01
void criterion7() {
  double t0 = now();
  WeightedMeasure m = haar_circle(300);
  double prev = -1e18, worst_gap_margin = -1e18, worst_mono = 0.0;
  for (int k : {8, 16, 32}) {
    double phi = chebyshev_envelope(m, k, pt1(2.0));
    worst_mono = std::max(worst_mono, prev - phi);
    prev = phi;
    double gap = std::abs(std::log(2.0) - phi);
    worst_gap_margin = std::max(worst_gap_margin, gap - (0.2 / k + 0.01));
  }
  bool pass = worst_mono <= 1e-7 && worst_gap_margin <= 0.0;
  line(7, "envelope approximant monotone + gap", pass,
       fmt("max monotonicity violation %.1e, worst gap margin %.1e", worst_mono,
           worst_gap_margin),
       now() - t0);
}

// --- 8. Markov factors
void criterion8() {
  double t0 = now();
  SetSpec sc, si, sa;
  sc.tag = "circle";
  si.tag = "interval";
  sa.tag = "arc_union";
  CompactSet Kc = build_set(sc), Ki = build_set(si), Ka = build_set(sa);
  bool pass = true;
  double arc_lo = 1e18, arc_hi = 0.0;
  for (int k : {8, 16, 32, 64}) {
    double ci = markov_factor(Ki, k, 30, 11).factor_over_k2;
    double cc = markov_factor(Kc, k, 30, 11).factor_over_k;
    double ca = markov_factor(Ka, k, 30, 11).factor_over_k2;
    if (ci < 0.99 || ci > 1.01) pass = false;
    if (cc < 0.99 || cc > 1.01) pass = false;
    arc_lo = std::min(arc_lo, ca);
    arc_hi = std::max(arc_hi, ca);
  }
  if (arc_hi > 4.0 * arc_lo) pass = false;
  line(8, "Markov factors", pass,
       fmt("interval/circle at classical equality, arcs factor/k^2 in [%.3f, %.3f]", arc_lo,
           arc_hi),
       now() - t0);
}

// --- 9. zeros large deviation on the circle, gaussian, 500 trials
void criterion9() {
  double t0 = now();
  const int trials = 500;
  std::vector<int> ks{32, 64, 128, 256};
  WeightedMeasure m = haar_circle(4 * 256 + 16);
  EnvelopeOracle V = envelope_oracle(m.set, {});
  WeightedAtoms ref = reference_measure(V, std::nullopt);
  Dictionary dict(2.0);
  auto refp = dict.pair_all(ref);
  CoefficientLaw law = CoefficientLaw::gaussian();

  std::vector<double> med_l1, avg_d2, flat;
  bool pass = true;
  std::string detail;
  for (int k : ks) {
    OrthoBasis B = build_basis(m, k, 64);
    std::vector<double> l1s;
    WeightedAtoms pooled;
    for (int t = 0; t < trials; ++t) {
      Poly p = sample_poly(B, law, 20260824, (std::uint64_t(k) << 32) | t);
      EmpiricalZeroMeasure zm = zero_measure(p, k, std::nullopt);
      l1s.push_back(potential_l1(p, k, V, 2.0, std::nullopt, &zm.atoms.atoms).value);
      for (size_t i = 0; i < zm.atoms.atoms.size(); ++i) {
        pooled.atoms.push_back(zm.atoms.atoms[i]);
        pooled.weights.push_back(zm.atoms.weights[i] / trials);
      }
    }
    flat.insert(flat.end(), l1s.begin(), l1s.end());
    med_l1.push_back(median(l1s));
    auto pp = dict.pair_all(pooled);
    double d2 = 0.0;
    for (size_t i = 0; i < pp.size(); ++i) d2 = std::max(d2, std::abs(pp[i] - refp[i]));
    avg_d2.push_back(d2);
    double lk = std::log(double(k)) / k;
    if (med_l1.back() > 5.0 * lk) pass = false;
    if (d2 > 3.0 * lk) pass = false;
  }
  for (size_t i = 1; i < ks.size(); ++i)
    if (med_l1[i] >= med_l1[i - 1]) pass = false;
  DeviationCurve curve = deviation_curve(flat, ks, trials, 10.0);
  for (size_t i = 1; i < ks.size(); ++i)
    if (curve.points[i].fraction > curve.points[i - 1].fraction + 1e-12) pass = false;
  if (curve.points.back().fraction > 0.05) pass = false;
  line(9, "circle zeros large deviation", pass,
       fmt("median L1 %.4f -> %.4f, avg dist2(k=256) %.4f", med_l1.front(), med_l1.back(),
           avg_d2.back()) +
           fmt(", exceedance(k=256) %.3f", curve.points.back().fraction),
       now() - t0);
}

// --- 10. torus2 line-slice zeros: median dist2 <= 10 log k / k and decreasing
void criterion10() {
  double t0 = now();
  const int trials = 60;
  std::vector<int> ks{16, 32, 64};
  EnvelopeOracle V;
  {
    SetSpec s;
    s.tag = "torus2";
    V = envelope_oracle(build_set(s), {});
  }
  Point2 base, dir;
  base << 0.0, 2.0;
  dir << 1.0, 0.0;
  ComplexLine L(base, dir);
  WeightedAtoms ref = reference_measure(V, L);
  Dictionary dict(3.0);
  auto refp = dict.pair_all(ref);
  CoefficientLaw law = CoefficientLaw::gaussian();

  std::vector<double> med;
  bool pass = true;
  for (int k : ks) {
    WeightedMeasure m = haar_torus(4 * k + 16);
    OrthoBasis B = build_basis(m, k, 64);
    std::vector<double> d2s;
    for (int t = 0; t < trials; ++t) {
      Poly p = sample_poly(B, law, 7, (std::uint64_t(k) << 32) | t);
      EmpiricalZeroMeasure zm = zero_measure(p, k, L);
      auto pp = dict.pair_all(zm.atoms);
      double d2 = 0.0;
      for (size_t i = 0; i < pp.size(); ++i) d2 = std::max(d2, std::abs(pp[i] - refp[i]));
      d2s.push_back(d2);
    }
    med.push_back(median(d2s));
    if (med.back() > 10.0 * std::log(double(k)) / k) pass = false;
  }
  for (size_t i = 1; i < med.size(); ++i)
    if (med[i] >= med[i - 1]) pass = false;
  line(10, "torus line-slice zeros", pass,
       fmt("median dist2: %.4f, %.4f, %.4f", med[0], med[1], med[2]), now() - t0);
}

// --- 11. cross-cutting invariant suite on every catalog configuration
void criterion11() {
  double t0 = now();
  bool pass = true;
  std::string detail;
  struct Cfg {
    const char* tag;
    int k;
  };
  for (Cfg cfg : {Cfg{"circle", 16}, Cfg{"interval", 16}, Cfg{"jordan_curve", 16},
                  Cfg{"arc_union", 16}, Cfg{"torus2", 10}}) {
    SetSpec s;
    s.tag = cfg.tag;
    if (s.tag == "jordan_curve") s.polar_coeffs = {1.0, 0.25};
    WeightedMeasure m = build_measure(build_set(s), {}, {}, 4 * cfg.k + 16);
    int bits = suggest_precision_bits(cfg.tag, cfg.k, 0);
    OrthoBasis B = build_basis(m, cfg.k, bits);
    int dk = poly_dim(m.set.ambient_dim, cfg.k);

    double res = verify_orthonormality(B, m, cfg.k);
    double tr = bergman_trace(B, m, cfg.k);
    bool ok = res < 1e-10 && std::abs(tr - dk) / dk < 1e-6;

    // b_tilde monotone in k
    OrthoBasis Blo = build_basis(m, cfg.k / 2, bits);
    for (double r : {0.4, 1.3, 2.5}) {
      Point2 z;
      z.setZero();
      z(0) = std::polar(r, 0.8);
      if (m.set.ambient_dim == 2) z(1) = std::polar(r, -0.3);
      if (bergman_at(B, m, z).log_b_tilde < bergman_at(Blo, m, z).log_b_tilde - 1e-10) ok = false;
    }

    // reproducing bound for a fixed low-degree polynomial
    Poly q(m.set.ambient_dim, 2);
    q.at(0, 0) = 1.0;
    q.at(2, 0) = Cplx(0.5, -0.25);
    double n2 = m.integrate([&](const Point2& z) { return std::norm(eval(q, z)); });
    Point2 zz;
    zz.setZero();
    zz(0) = Cplx(1.4, 0.2);
    if (std::norm(eval(q, zz)) > bergman_at(B, m, zz).b_tilde * n2 * (1.0 + 1e-9)) ok = false;

    // determinism across a full rebuild
    if (basis_fingerprint(B) != basis_fingerprint(build_basis(m, cfg.k, bits))) ok = false;

    if (!ok) {
      pass = false;
      detail += std::string(cfg.tag) + " ";
    }
  }
  if (pass) detail = "orthonormality, trace, monotonicity, reproducing bound, determinism";
  line(11, "cross-cutting invariants", pass, detail, now() - t0);
}

}  // namespace

int main() {
  double t0 = now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%s: %d of 11 criteria failed [total %.1fs]\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures, now() - t0);
  return g_failures == 0 ? 0 : 2;
}
