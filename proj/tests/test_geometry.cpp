#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bk/geometry.hpp"

using namespace bk;

TEST_CASE("catalog validation") {
  SetSpec bad;
  bad.tag = "pentagon";
  CHECK_THROWS_AS(build_set(bad), GeometryError);

  SetSpec c;
  c.tag = "circle";
  c.radius = -1.0;
  CHECK_THROWS_AS(build_set(c), GeometryError);

  SetSpec j;
  j.tag = "jordan_curve";
  j.polar_coeffs = {0.5, 0.9};  // radius dips below zero
  CHECK_THROWS_AS(build_set(j), GeometryError);

  SetSpec a;
  a.tag = "arc_union";
  a.arc_angle = M_PI;  // parallel arcs are not transverse
  CHECK_THROWS_AS(build_set(a), GeometryError);
}

TEST_CASE("quadrature rules are exact on their design class") {
  Rule1d g = gauss_legendre(8);
  double s = 0.0;
  for (int i = 0; i < g.nodes.size(); ++i) s += g.weights(i) * std::pow(g.nodes(i), 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));

  Rule1d t = trapezoid_periodic(32, 0.0, 2 * M_PI);
  double c = 0.0;
  for (int i = 0; i < t.nodes.size(); ++i) c += t.weights(i) * std::cos(7.0 * t.nodes(i));
  CHECK(std::abs(c) < 1e-13);

  auto panels = graded_panels(0.0, 1.0, {0.0}, 8);
  Rule1d cg = composite_gl(panels, 16);
  double v = 0.0;  // integral of x^{-1/2} on (0,1] = 2
  for (int i = 0; i < cg.nodes.size(); ++i) v += cg.weights(i) / std::sqrt(cg.nodes(i));
  CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("measure masses match closed forms") {
  SetSpec c;
  c.tag = "circle";
  c.radius = 2.0;
  WeightedMeasure mc = build_measure(build_set(c), {}, {}, 64);
  CHECK(mc.total_mass == doctest::Approx(4.0 * M_PI).epsilon(1e-12));

  SetSpec i;
  i.tag = "interval";
  WeightedMeasure mi = build_measure(build_set(i), {}, {}, 64);
  CHECK(mi.total_mass == doctest::Approx(2.0).epsilon(1e-12));

  SetSpec t;
  t.tag = "torus2";
  WeightedMeasure mt = build_measure(build_set(t), {}, {}, 48);
  CHECK(mt.total_mass == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));

  SetSpec a;
  a.tag = "arc_union";
  WeightedMeasure ma = build_measure(build_set(a), {}, {}, 64);
  CHECK(ma.total_mass == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("integrate: moments of Haar vanish") {
  SetSpec c;
  c.tag = "circle";
  WeightedMeasure m = build_measure(build_set(c), {}, {}, 64);
  double v = m.integrate([](const Point2& z) { return std::pow(z(0), 5).real(); });
  CHECK(std::abs(v) < 1e-13);
  double w = m.integrate([](const Point2& z) { return std::norm(z(0)); });
  CHECK(w == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("singular density: graded panels recover the exact mass") {
  SetSpec i;
  i.tag = "interval";
  DensitySpec d;
  d.kind = DensitySpec::Kind::singular;
  d.z0 = 1.0;
  d.exponent = -0.5;  // integrable endpoint blow-up
  d.lambda = 0.0;
  WeightedMeasure m = build_measure(build_set(i), d, {}, 256);
  // integral of |x-1|^{-1/2} over [-1,1] = 2 sqrt 2
  CHECK(m.total_mass == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("under-resolved quadrature is rejected") {
  SetSpec c;
  c.tag = "circle";
  DensitySpec d;
  d.kind = DensitySpec::Kind::smoothed_indicator;
  d.ind_sharp = 600.0;  // near-discontinuous arc indicator
  d.ind_width = 0.3;
  CHECK_THROWS_AS(build_measure(build_set(c), d, {}, 8), GeometryError);
}

TEST_CASE("ball mass and tau certification on the circle") {
  SetSpec c;
  c.tag = "circle";
  DensitySpec d;
  d.constant = 1.0 / (2.0 * M_PI);
  WeightedMeasure m = build_measure(build_set(c), d, {}, 2048);
  Point2 z;
  z.setZero();
  z(0) = 1.0;
  BallMass bm = ball_mass(m, z, 0.1);
  CHECK(bm.resolved);
  // Haar mass of a radius-r ball around a point of the unit circle ~ r/pi
  CHECK(bm.mass == doctest::Approx(0.1 / M_PI).epsilon(0.01));

  TauCertificate cert = certify_tau(m, {z}, {0.05, 0.1, 0.2});
  CHECK(cert.all_resolved);
  CHECK(cert.tau >= 1.0);
  CHECK(cert.tau <= 1.8);
  CHECK(cert.r0 == doctest::Approx(0.2));
}

TEST_CASE("weight catalog evaluates globally") {
  WeightSpec q;
  q.kind = WeightSpec::Kind::re_z;
  Point2 z;
  z.setZero();
  z(0) = Cplx(5.0, 2.0);  // far off any catalog set
  CHECK(q.eval(z) == doctest::Approx(5.0));

  WeightSpec h;
  h.kind = WeightSpec::Kind::holder_bump;
  h.z0 = 1.0;
  h.alpha = 0.5;
  h.amplitude = 0.2;
  CHECK(h.eval(z) == doctest::Approx(0.2 * std::pow(std::abs(Cplx(4.0, 2.0)), 0.5)));
}
