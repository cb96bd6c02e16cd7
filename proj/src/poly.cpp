#include "bk/poly.hpp"

#include <vector>

namespace bk {

int Poly::actual_degree(double tol) const {
  auto mons = monomial_list(nvars, degree_bound);
  int deg = 0;
  for (int i = 0; i < coeffs.size(); ++i)
    if (std::abs(coeffs(i)) > tol) deg = std::max(deg, mons[i].degree());
  return deg;
}

Cplx eval(const Poly& p, Cplx z) {
  if (p.nvars != 1) throw std::invalid_argument("eval: expected univariate polynomial");
  Cplx acc = 0.0;
  for (int j = static_cast<int>(p.coeffs.size()) - 1; j >= 0; --j) acc = acc * z + p.coeffs(j);
  return acc;
}

Cplx eval(const Poly& p, const Point2& z) {
  if (p.nvars == 1) return eval(p, z(0));
  int k = p.degree_bound;
  std::vector<Cplx> pw1(k + 1), pw2(k + 1);
  pw1[0] = pw2[0] = 1.0;
  for (int j = 1; j <= k; ++j) {
    pw1[j] = pw1[j - 1] * z(0);
    pw2[j] = pw2[j - 1] * z(1);
  }
  Cplx acc = 0.0;
  int idx = 0;
  for (int t = 0; t <= k; ++t)
    for (int a = t; a >= 0; --a) acc += p.coeffs(idx++) * pw1[a] * pw2[t - a];
  return acc;
}

Poly derivative(const Poly& p, int var) {
  int k = p.degree_bound;
  Poly d(p.nvars, std::max(0, k - 1));
  auto mons = monomial_list(p.nvars, k);
  for (int i = 0; i < p.coeffs.size(); ++i) {
    const auto& m = mons[i];
    if (var == 0 && m.a > 0)
      d.coeffs(monomial_index(p.nvars, m.a - 1, m.b)) += double(m.a) * p.coeffs(i);
    else if (var == 1 && m.b > 0)
      d.coeffs(monomial_index(p.nvars, m.a, m.b - 1)) += double(m.b) * p.coeffs(i);
  }
  return d;
}

Eigen::VectorXcd gradient(const Poly& p, const Point2& z) {
  Eigen::VectorXcd g(p.nvars);
  g(0) = eval(derivative(p, 0), z);
  if (p.nvars == 2) g(1) = eval(derivative(p, 1), z);
  return g;
}

Cplx gradient1(const Poly& p, Cplx z) { return eval(derivative(p, 0), z); }

Poly restrict_to_line(const Poly& p, const ComplexLine& L) {
  if (p.nvars != 2) throw std::invalid_argument("restrict_to_line: polynomial must be bivariate");
  int k = p.degree_bound;
  Poly q(1, k);

  // Binomial expansions of (B + t D)^a for both coordinates, built once.
  // row a holds the t-coefficients of (B + t D)^a.
  auto expand = [&](Cplx B, Cplx D) {
    std::vector<std::vector<Cplx>> rows(k + 1);
    rows[0] = {1.0};
    for (int a = 1; a <= k; ++a) {
      rows[a].assign(a + 1, 0.0);
      for (int i = 0; i < a; ++i) {
        rows[a][i] += rows[a - 1][i] * B;
        rows[a][i + 1] += rows[a - 1][i] * D;
      }
    }
    return rows;
  };
  auto e1 = expand(L.base(0), L.direction(0));
  auto e2 = expand(L.base(1), L.direction(1));

  auto mons = monomial_list(2, k);
  for (int i = 0; i < p.coeffs.size(); ++i) {
    Cplx c = p.coeffs(i);
    if (c == 0.0) continue;
    const auto& ra = e1[mons[i].a];
    const auto& rb = e2[mons[i].b];
    for (size_t u = 0; u < ra.size(); ++u)
      for (size_t v = 0; v < rb.size(); ++v) q.coeffs(int(u + v)) += c * ra[u] * rb[v];
  }
  return q;
}

}  // namespace bk
