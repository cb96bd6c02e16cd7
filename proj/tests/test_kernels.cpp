#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bk/kernels.hpp"

using namespace bk;

namespace {

WeightedMeasure haar_circle(int order) {
  SetSpec s;
  s.tag = "circle";
  DensitySpec d;
  d.constant = 1.0 / (2.0 * M_PI);
  return build_measure(build_set(s), d, {}, order);
}

}  // namespace

TEST_CASE("circle Haar: B_k is identically k+1") {
  WeightedMeasure m = haar_circle(256);
  for (int k : {4, 16, 48}) {
    OrthoBasis B = build_basis(m, k, 64);
    for (double th : {0.0, 0.9, 2.5, 4.0}) {
      Point2 z;
      z.setZero();
      z(0) = std::polar(1.0, th);
      BergmanValue v = bergman_at(B, m, z);
      CHECK(v.b_k == doctest::Approx(k + 1.0).epsilon(1e-10));
      CHECK(v.b_tilde == doctest::Approx(k + 1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("trace identity on every catalog set") {
  for (const char* tag : {"circle", "interval", "jordan_curve", "arc_union"}) {
    SetSpec s;
    s.tag = tag;
    if (s.tag == "jordan_curve") s.polar_coeffs = {1.0, 0.2, 0.1};
    WeightedMeasure m = build_measure(build_set(s), {}, {}, 4 * 16 + 16);
    OrthoBasis B = build_basis(m, 16, suggest_precision_bits(tag, 16, 0));
    CHECK(bergman_trace(B, m, 16) == doctest::Approx(17.0).epsilon(1e-6));
  }
  SetSpec t;
  t.tag = "torus2";
  WeightedMeasure mt = build_measure(build_set(t), {}, {}, 4 * 10 + 16);
  OrthoBasis Bt = build_basis(mt, 10, 64);
  CHECK(bergman_trace(Bt, mt, 10) == doctest::Approx(poly_dim(2, 10)).epsilon(1e-6));
}

TEST_CASE("b_tilde is monotone in k") {
  WeightedMeasure m = haar_circle(300);
  OrthoBasis b8 = build_basis(m, 8, 64);
  OrthoBasis b16 = build_basis(m, 16, 64);
  OrthoBasis b32 = build_basis(m, 32, 64);
  for (double r : {0.5, 1.0, 1.7, 3.0}) {
    Point2 z;
    z.setZero();
    z(0) = std::polar(r, 1.1);
    double v8 = bergman_at(b8, m, z).log_b_tilde;
    double v16 = bergman_at(b16, m, z).log_b_tilde;
    double v32 = bergman_at(b32, m, z).log_b_tilde;
    CHECK(v16 >= v8 - 1e-10);
    CHECK(v32 >= v16 - 1e-10);
  }
}

TEST_CASE("reproducing bound: |p(z)|^2 <= B~_k(z) ||p||^2") {
  SetSpec s;
  s.tag = "interval";
  WeightedMeasure m = build_measure(build_set(s), {}, {}, 128);
  int k = 12;
  OrthoBasis B = build_basis(m, k, 320);
  Poly p(1, k);
  p.at(0) = Cplx(0.4, -1.0);
  p.at(3) = Cplx(2.0, 0.7);
  p.at(12) = Cplx(-0.8, 0.1);
  double norm2 = m.integrate([&](const Point2& z) { return std::norm(eval(p, z)); });
  for (double x : {0.3, 1.0, 1.8}) {
    Point2 z;
    z.setZero();
    z(0) = Cplx(x, 0.4);
    double lhs = std::norm(eval(p, z));
    double rhs = bergman_at(B, m, z).b_tilde * norm2;
    CHECK(lhs <= rhs * (1.0 + 1e-9));
  }
}

TEST_CASE("sup over K and the K-grid agree for constant kernels") {
  WeightedMeasure m = haar_circle(300);
  OrthoBasis B = build_basis(m, 24, 64);
  CHECK(sup_bergman(B, m) == doctest::Approx(25.0).epsilon(1e-9));
}

TEST_CASE("growth fit recovers a synthetic exponent") {
  std::vector<std::pair<int, double>> data;
  for (int k : {8, 16, 32, 64, 128}) data.emplace_back(k, 3.7 * std::pow(k, 1.5));
  GrowthFit f = growth_fit(data, 1.6);
  CHECK(f.fitted_exponent == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(f.pass);
  GrowthFit g = growth_fit(data, 1.4);
  CHECK(!g.pass);
  // refuses fits without dynamic range
  std::vector<std::pair<int, double>> narrow{{8, 1.0}, {9, 1.1}, {10, 1.2}, {11, 1.3}, {12, 1.4}};
  CHECK_THROWS(growth_fit(narrow, 1.0));
}

TEST_CASE("basis fingerprint is stable and discriminating") {
  WeightedMeasure m = haar_circle(300);
  OrthoBasis a = build_basis(m, 12, 64);
  OrthoBasis b = build_basis(m, 12, 64);
  OrthoBasis c = build_basis(m, 13, 64);
  CHECK(basis_fingerprint(a) == basis_fingerprint(b));
  CHECK(basis_fingerprint(a) != basis_fingerprint(c));
}
