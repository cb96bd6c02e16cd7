#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "bk/poly.hpp"
#include "bk/roots.hpp"

using namespace bk;

TEST_CASE("graded-lex indexing round-trips") {
  CHECK(poly_dim(1, 7) == 8);
  CHECK(poly_dim(2, 0) == 1);
  CHECK(poly_dim(2, 3) == 10);
  auto mons = monomial_list(2, 4);
  CHECK(int(mons.size()) == poly_dim(2, 4));
  for (size_t i = 0; i < mons.size(); ++i)
    CHECK(monomial_index(2, mons[i].a, mons[i].b) == int(i));
  // within a degree block z1 powers descend
  CHECK(mons[3].a == 2);
  CHECK(mons[3].b == 0);
  CHECK(mons[5].a == 0);
  CHECK(mons[5].b == 2);
}

TEST_CASE("univariate eval and derivative") {
  Poly p(1, 3);  // 2 - z + 3 z^3
  p.at(0) = 2.0;
  p.at(1) = -1.0;
  p.at(3) = 3.0;
  Cplx z(0.5, -1.25);
  Cplx want = 2.0 - z + 3.0 * z * z * z;
  CHECK(std::abs(eval(p, z) - want) < 1e-14);
  Poly dp = derivative(p, 0);
  CHECK(std::abs(eval(dp, z) - (-1.0 + 9.0 * z * z)) < 1e-13);
  CHECK(p.actual_degree() == 3);
  Poly q(1, 5);
  q.at(2) = 1.0;
  CHECK(q.actual_degree() == 2);
}

TEST_CASE("bivariate eval, gradient, line restriction") {
  Poly p(2, 3);  // z1^2 z2 + 4 z2 - 1
  p.at(2, 1) = 1.0;
  p.at(0, 1) = 4.0;
  p.at(0, 0) = -1.0;
  Point2 z;
  z << Cplx(1.0, 1.0), Cplx(-0.5, 2.0);
  Cplx want = z(0) * z(0) * z(1) + 4.0 * z(1) - 1.0;
  CHECK(std::abs(eval(p, z) - want) < 1e-13);

  auto g = gradient(p, z);
  CHECK(std::abs(g(0) - 2.0 * z(0) * z(1)) < 1e-13);
  CHECK(std::abs(g(1) - (z(0) * z(0) + 4.0)) < 1e-13);

  Point2 base, dir;
  base << Cplx(0.3, -0.2), Cplx(1.0, 0.5);
  dir << Cplx(1.0, 2.0), Cplx(-0.25, 0.0);
  ComplexLine L(base, dir);
  Poly q = restrict_to_line(p, L);
  for (Cplx t : {Cplx(0.0), Cplx(1.3, -0.4), Cplx(-2.0, 0.9)})
    CHECK(std::abs(eval(q, t) - eval(p, L.point(t))) < 1e-12);
}

TEST_CASE("roots: exact factorizations") {
  Poly p(1, 3);  // (z-1)(z-2)(z-3)
  p.at(0) = -6.0;
  p.at(1) = 11.0;
  p.at(2) = -6.0;
  p.at(3) = 1.0;
  RootSet r = roots(p);
  REQUIRE(r.roots.size() == 3);
  std::vector<double> re;
  for (auto z : r.roots) {
    re.push_back(z.real());
    CHECK(std::abs(z.imag()) < 1e-10);
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("roots: Vieta sums for a random quintic") {
  Poly p(1, 5);
  p.at(0) = Cplx(0.7, -0.3);
  p.at(1) = Cplx(-1.2, 0.8);
  p.at(2) = Cplx(0.1, 2.0);
  p.at(3) = Cplx(3.0, -0.5);
  p.at(4) = Cplx(-0.4, 0.2);
  p.at(5) = Cplx(1.5, 1.0);
  RootSet r = roots(p);
  REQUIRE(r.roots.size() == 5);
  Cplx sum = 0.0, prod = 1.0;
  for (auto z : r.roots) {
    sum += z;
    prod *= z;
  }
  CHECK(std::abs(sum - (-p.at(4) / p.at(5))) < 1e-9);
  CHECK(std::abs(prod - (std::pow(Cplx(-1.0), 5) * p.at(0) / p.at(5))) < 1e-9);
}

TEST_CASE("roots: origin multiplicity and scale extremes") {
  Poly p(1, 40);  // z^37 (z - 2) up to scale
  p.at(38) = 1.0;
  p.at(37) = -2.0;
  RootSet r = roots(p);
  REQUIRE(r.roots.size() == 38);
  int at_origin = 0;
  double far = 0.0;
  for (auto z : r.roots) {
    if (std::abs(z) < 1e-12) ++at_origin;
    far = std::max(far, std::abs(z));
  }
  CHECK(at_origin == 37);
  CHECK(far == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("roots: unit-circle polynomial of high degree") {
  Poly p(1, 128);  // z^128 - 1
  p.at(0) = -1.0;
  p.at(128) = 1.0;
  RootSet r = roots(p);
  REQUIRE(r.roots.size() == 128);
  for (auto z : r.roots) CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
  CHECK(r.residual < 1e-10);
}

TEST_CASE("roots: zero polynomial rejected") {
  Poly p(1, 4);
  CHECK_THROWS_AS(roots(p), std::invalid_argument);
}
