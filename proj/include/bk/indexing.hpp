#pragma once

// Graded-lexicographic monomial indexing for 1 and 2 complex variables.
// Within a given total degree t in two variables, the power of the first
// variable decreases: z1^t, z1^{t-1} z2, ..., z2^t.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bk {

// Dimension of the space of polynomials of degree <= k in nvars variables.
inline int poly_dim(int nvars, int k) {
  if (nvars == 1) return k + 1;
  if (nvars == 2) return (k + 1) * (k + 2) / 2;
  throw std::invalid_argument("poly_dim: nvars must be 1 or 2");
}

struct Monomial {
  int a = 0;  // exponent of z1
  int b = 0;  // exponent of z2 (always 0 when nvars == 1)
  int degree() const { return a + b; }
};

inline int monomial_index(int nvars, int a, int b) {
  if (nvars == 1) return a;
  int t = a + b;
  return t * (t + 1) / 2 + (t - a);
}

inline std::vector<Monomial> monomial_list(int nvars, int k) {
  std::vector<Monomial> out;
  out.reserve(poly_dim(nvars, k));
  if (nvars == 1) {
    for (int a = 0; a <= k; ++a) out.push_back({a, 0});
  } else {
    for (int t = 0; t <= k; ++t)
      for (int a = t; a >= 0; --a) out.push_back({a, t - a});
  }
  return out;
}

}  // namespace bk
