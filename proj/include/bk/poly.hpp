#pragma once

// Complex polynomials in one or two variables with dense graded-lex
// coefficient storage.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

#include "bk/indexing.hpp"

namespace bk {

using Cplx = std::complex<double>;
using Point2 = Eigen::Vector2cd;

struct Poly {
  int nvars = 1;
  int degree_bound = 0;
  Eigen::VectorXcd coeffs;  // length poly_dim(nvars, degree_bound)

  Poly() = default;
  Poly(int nv, int k) : nvars(nv), degree_bound(k), coeffs(Eigen::VectorXcd::Zero(poly_dim(nv, k))) {}

  static Poly constant(int nv, Cplx c) {
    Poly p(nv, 0);
    p.coeffs(0) = c;
    return p;
  }

  Cplx& at(int a, int b = 0) { return coeffs(monomial_index(nvars, a, b)); }
  Cplx at(int a, int b = 0) const { return coeffs(monomial_index(nvars, a, b)); }

  // Actual degree after ignoring trailing zero coefficients.
  int actual_degree(double tol = 0.0) const;
};

struct ComplexLine {
  Point2 base;
  Point2 direction;  // unit vector

  ComplexLine(const Point2& b, const Point2& d) : base(b), direction(d) {
    double n = d.norm();
    if (n == 0.0) throw std::invalid_argument("ComplexLine: zero direction");
    direction /= n;
  }
  Point2 point(Cplx t) const { return base + t * direction; }
};

Cplx eval(const Poly& p, Cplx z);
Cplx eval(const Poly& p, const Point2& z);

// Partial derivative with respect to variable `var` (0 or 1).
Poly derivative(const Poly& p, int var);

Eigen::VectorXcd gradient(const Poly& p, const Point2& z);
Cplx gradient1(const Poly& p, Cplx z);

// q(t) = p(base + t * direction), computed by coefficient convolution.
Poly restrict_to_line(const Poly& p, const ComplexLine& L);

}  // namespace bk
