#include "bk/roots.hpp"

#include <algorithm>
#include <cmath>

namespace bk {

namespace {

// Newton correction p/dp by Horner. For |z| > 1 the reversed polynomial is
// used and the explicit z^d factor cancels out of the ratio, so degree-500
// iterates far outside the unit disk never overflow double.
Cplx newton_correction(const std::vector<Cplx>& c, Cplx z) {
  int d = static_cast<int>(c.size()) - 1;
  if (std::abs(z) <= 1.0) {
    Cplx p = c[d], dp = 0.0;
    for (int j = d - 1; j >= 0; --j) {
      dp = dp * z + p;
      p = p * z + c[j];
    }
    if (p == 0.0) return 0.0;
    return (dp != 0.0) ? p / dp : Cplx(1e-3, 1e-3);
  }
  // p(z) = z^d q(w), w = 1/z, q(w) = c[0] w^d + c[1] w^{d-1} + ... + c[d];
  // p'(z) = d z^{d-1} q - z^{d-2} q', hence p/p' = z^2 q / (d z q - q').
  Cplx w = 1.0 / z;
  Cplx q = c[0], dq = 0.0;
  for (int j = 1; j <= d; ++j) {
    dq = dq * w + q;
    q = q * w + c[j];
  }
  if (q == 0.0) return 0.0;
  Cplx denom = double(d) * z * q - dq;
  if (denom == 0.0) return Cplx(1e-3, 1e-3);
  return z * z * q / denom;
}

// Scale-free backward error |p(z)| / sum_j |c_j| |z|^j, evaluated through
// the reversed polynomial outside the unit disk.
double backward_error(const std::vector<Cplx>& c, Cplx z) {
  int d = static_cast<int>(c.size()) - 1;
  Cplx v = std::abs(z) <= 1.0 ? z : 1.0 / z;
  bool reversed = std::abs(z) > 1.0;
  Cplx p = reversed ? c[0] : c[d];
  double scale = std::abs(p);
  double av = std::abs(v);
  for (int j = 1; j <= d; ++j) {
    Cplx cj = reversed ? c[j] : c[d - j];
    p = p * v + cj;
    scale = scale * av + std::abs(cj);
  }
  return scale > 0.0 ? std::abs(p) / scale : 0.0;
}

}  // namespace

RootSet roots(const Poly& q, const RootsOptions& opt) {
  if (q.nvars != 1) throw std::invalid_argument("roots: univariate polynomial required");

  std::vector<Cplx> c(q.coeffs.data(), q.coeffs.data() + q.coeffs.size());
  double cmax = 0.0;
  for (auto& v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) throw std::invalid_argument("roots: polynomial is identically zero");

  // Strip negligible leading coefficients.
  while (c.size() > 1 && std::abs(c.back()) < opt.strip_threshold * cmax) c.pop_back();
  int d = static_cast<int>(c.size()) - 1;

  RootSet out;
  // Factor out roots at the origin.
  int zeros_at_origin = 0;
  while (zeros_at_origin < d && c[zeros_at_origin] == 0.0) ++zeros_at_origin;
  if (zeros_at_origin > 0) {
    c.erase(c.begin(), c.begin() + zeros_at_origin);
    d -= zeros_at_origin;
    out.roots.assign(zeros_at_origin, Cplx(0.0));
  }
  if (d == 0) return out;

  // Cauchy-type radius and golden-angle initial placement.
  double R = 0.0;
  for (int j = 0; j < d; ++j)
    R = std::max(R, std::pow(std::abs(c[j] / c[d]), 1.0 / double(d - j)));
  R = 1.2 * R + 1e-3;
  const double golden = 2.399963229728653;  // 2*pi*(1 - 1/phi)
  std::vector<Cplx> z(d);
  for (int i = 0; i < d; ++i) {
    double r = R * (0.6 + 0.4 * double(i + 1) / double(d));
    double th = golden * i + 0.1234;
    z[i] = std::polar(r, th);
  }

  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations && !converged; ++it) {
    converged = true;
    for (int i = 0; i < d; ++i) {
      Cplx newton = newton_correction(c, z[i]);
      if (newton == 0.0) continue;
      Cplx sum = 0.0;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        Cplx diff = z[i] - z[j];
        if (diff == 0.0) diff = Cplx(1e-14, 1e-14);
        sum += 1.0 / diff;
      }
      Cplx denom = 1.0 - newton * sum;
      Cplx step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
      z[i] -= step;
      if (std::abs(step) > opt.tol * (1.0 + std::abs(z[i]))) converged = false;
    }
  }

  double res = 0.0;
  for (int i = 0; i < d; ++i) res = std::max(res, backward_error(c, z[i]));
  // a stalled step-size test with fully converged values (e.g. a cluster
  // trading last-ulp corrections) still counts as success
  if (!converged && res < 1e-12) converged = true;

  out.roots.insert(out.roots.end(), z.begin(), z.end());
  out.residual = res;
  out.iterations = it;
  if (!converged) throw RootsError("roots: Aberth-Ehrlich did not converge", out);
  return out;
}

}  // namespace bk
