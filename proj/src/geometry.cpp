#include "bk/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bk {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

double Patch::polar_radius(double t) const {
  double r = polar_coeffs.size() > 0 ? polar_coeffs(0) : 1.0;
  for (int j = 1; 2 * j - 1 < polar_coeffs.size(); ++j) {
    r += polar_coeffs(2 * j - 1) * std::cos(j * t);
    if (2 * j < polar_coeffs.size()) r += polar_coeffs(2 * j) * std::sin(j * t);
  }
  return r;
}

double Patch::polar_radius_deriv(double t) const {
  double dr = 0.0;
  for (int j = 1; 2 * j - 1 < polar_coeffs.size(); ++j) {
    dr += -j * polar_coeffs(2 * j - 1) * std::sin(j * t);
    if (2 * j < polar_coeffs.size()) dr += j * polar_coeffs(2 * j) * std::cos(j * t);
  }
  return dr;
}

Point2 Patch::chart(const Eigen::Vector2d& t) const {
  Point2 z;
  z.setZero();
  switch (kind) {
    case Kind::circle_arc:
      z(0) = std::polar(radius, t(0));
      break;
    case Kind::segment:
      z(0) = seg_a + t(0) * (seg_b - seg_a);
      break;
    case Kind::polar_curve:
      z(0) = std::polar(polar_radius(t(0)), t(0));
      break;
    case Kind::torus_grid:
      z(0) = std::polar(radius, t(0));
      z(1) = std::polar(radius, t(1));
      break;
  }
  return z;
}

double Patch::jacobian_factor(const Eigen::Vector2d& t) const {
  switch (kind) {
    case Kind::circle_arc:
      return radius;
    case Kind::segment:
      return std::abs(seg_b - seg_a);
    case Kind::polar_curve: {
      double r = polar_radius(t(0)), dr = polar_radius_deriv(t(0));
      return std::sqrt(r * r + dr * dr);
    }
    case Kind::torus_grid:
      return radius * radius;
  }
  return 1.0;
}

CompactSet build_set(const SetSpec& spec) {
  CompactSet K;
  K.id = spec.tag;
  if (spec.tag == "circle") {
    if (spec.radius <= 0) throw GeometryError("build_set: circle radius must be positive");
    Patch p;
    p.kind = Patch::Kind::circle_arc;
    p.radius = spec.radius;
    p.lo << 0, 0;
    p.hi << kTwoPi, 0;
    p.periodic = true;
    K.ambient_dim = K.set_dim = 1;
    K.patches.push_back(p);
  } else if (spec.tag == "interval") {
    Patch p;
    p.kind = Patch::Kind::segment;
    p.seg_a = {-1.0, 0.0};
    p.seg_b = {1.0, 0.0};
    p.lo << 0, 0;
    p.hi << 1, 0;
    K.ambient_dim = K.set_dim = 1;
    K.patches.push_back(p);
    Point2 e1, e2;
    e1.setZero(); e2.setZero();
    e1(0) = {-1.0, 0.0};
    e2(0) = {1.0, 0.0};
    K.singular_points = {e1, e2};
  } else if (spec.tag == "jordan_curve") {
    Patch p;
    p.kind = Patch::Kind::polar_curve;
    p.polar_coeffs = spec.polar_coeffs.empty()
                         ? Eigen::VectorXd::Ones(1).eval()
                         : Eigen::Map<const Eigen::VectorXd>(spec.polar_coeffs.data(),
                                                             spec.polar_coeffs.size()).eval();
    p.lo << 0, 0;
    p.hi << kTwoPi, 0;
    p.periodic = true;
    // reject self-intersecting / degenerate radius
    for (int i = 0; i < 720; ++i)
      if (p.polar_radius(kTwoPi * i / 720.0) <= 0)
        throw GeometryError("build_set: jordan_curve radius must stay positive");
    K.ambient_dim = K.set_dim = 1;
    K.patches.push_back(p);
  } else if (spec.tag == "torus2") {
    Patch p;
    p.kind = Patch::Kind::torus_grid;
    p.param_dim = 2;
    p.radius = 1.0;
    p.lo << 0, 0;
    p.hi << kTwoPi, kTwoPi;
    p.periodic = true;
    K.ambient_dim = K.set_dim = 2;
    K.patches.push_back(p);
  } else if (spec.tag == "arc_union") {
    if (std::abs(std::sin(spec.arc_angle)) < 1e-12)
      throw GeometryError("build_set: arc_union arcs must be transverse");
    Patch p1, p2;
    p1.kind = p2.kind = Patch::Kind::segment;
    p1.seg_a = {0, 0};
    p1.seg_b = {1, 0};
    p2.seg_a = {0, 0};
    p2.seg_b = std::polar(1.0, spec.arc_angle);
    p1.lo << 0, 0; p1.hi << 1, 0;
    p2.lo << 0, 0; p2.hi << 1, 0;
    K.ambient_dim = K.set_dim = 1;
    K.patches = {p1, p2};
    Point2 s0, s1, s2;
    s0.setZero(); s1.setZero(); s2.setZero();
    s1(0) = p1.seg_b;
    s2(0) = p2.seg_b;
    K.singular_points = {s0, s1, s2};
  } else {
    throw GeometryError("build_set: unknown catalog tag '" + spec.tag + "'");
  }
  return K;
}

double DensitySpec::eval(const Point2& z, const Eigen::Vector2d& param) const {
  switch (kind) {
    case Kind::constant:
      return constant;
    case Kind::singular: {
      Point2 z0v;
      z0v.setZero();
      z0v(0) = z0;
      return constant * std::pow((z - z0v).norm(), exponent);
    }
    case Kind::smoothed_indicator: {
      double g = 0.5 * (1.0 + std::tanh(ind_sharp * (std::cos(param(0) - ind_center) -
                                                     std::cos(0.5 * ind_width))));
      return ind_floor + (constant - ind_floor) * g;
    }
  }
  return 0.0;
}

double WeightSpec::eval(const Point2& z) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::re_z:
      return z(0).real();
    case Kind::holder_bump: {
      Point2 z0v;
      z0v.setZero();
      z0v(0) = z0;
      return amplitude * std::pow((z - z0v).norm(), alpha);
    }
  }
  return 0.0;
}

namespace {

// Parameter of the density's singular point on a patch, if it lies there.
bool singular_param(const Patch& p, Cplx z0, double& t0) {
  switch (p.kind) {
    case Patch::Kind::circle_arc:
      if (std::abs(std::abs(z0) - p.radius) > 1e-9) return false;
      t0 = std::arg(z0);
      if (t0 < 0) t0 += kTwoPi;
      return true;
    case Patch::Kind::segment: {
      Cplx u = (z0 - p.seg_a) / (p.seg_b - p.seg_a);
      if (std::abs(u.imag()) > 1e-9 || u.real() < -1e-9 || u.real() > 1.0 + 1e-9) return false;
      t0 = std::clamp(u.real(), 0.0, 1.0);
      return true;
    }
    case Patch::Kind::polar_curve: {
      double t = std::arg(z0);
      if (t < 0) t += kTwoPi;
      if (std::abs(std::abs(z0) - p.polar_radius(t)) > 1e-9) return false;
      t0 = t;
      return true;
    }
    default:
      return false;
  }
}

std::vector<QuadRecipe> patch_recipes(const Patch& p, const DensitySpec& density, int order) {
  std::vector<QuadRecipe> rs;
  bool singular = density.kind == DensitySpec::Kind::singular;
  double t0 = 0.0;
  bool on_patch = singular && singular_param(p, density.z0, t0);

  auto axis_recipe = [&](double a, double b, bool periodic) {
    QuadRecipe r;
    r.a = a;
    r.b = b;
    if (on_patch && p.param_dim == 1) {
      r.kind = QuadRecipe::Kind::panels;
      r.panel_q = 16;
      if (periodic)
        r.panels = graded_panels(t0, t0 + kTwoPi, {t0, t0 + kTwoPi},
                                 std::max(16, order / 16));
      else
        r.panels = graded_panels(a, b, {t0}, std::max(16, order / 16));
    } else if (periodic) {
      r.kind = QuadRecipe::Kind::trapezoid;
      r.n = order;
    } else {
      r.kind = QuadRecipe::Kind::gauss;
      r.n = order;
    }
    return r;
  };

  if (p.param_dim == 1) {
    rs.push_back(axis_recipe(p.lo(0), p.hi(0), p.periodic));
  } else {
    rs.push_back(axis_recipe(p.lo(0), p.hi(0), p.periodic));
    rs.push_back(axis_recipe(p.lo(1), p.hi(1), p.periodic));
  }
  return rs;
}

Rule1d realize(const QuadRecipe& r) {
  switch (r.kind) {
    case QuadRecipe::Kind::trapezoid:
      return trapezoid_periodic(r.n, r.a, r.b);
    case QuadRecipe::Kind::gauss:
      return map_rule(gauss_legendre(std::min(r.n, 2000)), r.a, r.b);
    case QuadRecipe::Kind::panels:
      return composite_gl(r.panels, r.panel_q);
  }
  return {};
}

WeightedMeasure assemble(const CompactSet& set, const DensitySpec& density,
                         const WeightSpec& weight, int order) {
  WeightedMeasure m;
  m.set = set;
  m.density = density;
  m.weight = weight;
  m.quad_order = order;

  double mass = 0.0;
  double spacing = 0.0;
  for (size_t pi = 0; pi < set.patches.size(); ++pi) {
    const Patch& p = set.patches[pi];
    auto recs = patch_recipes(p, density, order);
    m.recipes.push_back(recs);
    Rule1d r0 = realize(recs[0]);
    if (p.param_dim == 1) {
      for (int i = 0; i < r0.nodes.size(); ++i) {
        WeightedMeasure::Node nd;
        nd.param << r0.nodes(i), 0.0;
        nd.z = p.chart(nd.param);
        nd.leb_w = r0.weights(i) * p.jacobian_factor(nd.param);
        nd.rho = density.eval(nd.z, nd.param);
        nd.q = weight.eval(nd.z);
        nd.patch = static_cast<int>(pi);
        if (nd.rho < 0) throw GeometryError("build_measure: density negative at a node");
        mass += nd.leb_w * nd.rho;
        m.nodes.push_back(std::move(nd));
      }
      Eigen::Vector2d mid;
      mid << 0.5 * (p.lo(0) + p.hi(0)), 0.0;
      spacing = std::max(spacing, (p.hi(0) - p.lo(0)) / r0.nodes.size() * p.jacobian_factor(mid));
    } else {
      Rule1d r1 = realize(recs[1]);
      for (int i = 0; i < r0.nodes.size(); ++i)
        for (int j = 0; j < r1.nodes.size(); ++j) {
          WeightedMeasure::Node nd;
          nd.param << r0.nodes(i), r1.nodes(j);
          nd.z = p.chart(nd.param);
          nd.leb_w = r0.weights(i) * r1.weights(j) * p.jacobian_factor(nd.param);
          nd.rho = density.eval(nd.z, nd.param);
          nd.q = weight.eval(nd.z);
          nd.patch = static_cast<int>(pi);
          if (nd.rho < 0) throw GeometryError("build_measure: density negative at a node");
          mass += nd.leb_w * nd.rho;
          m.nodes.push_back(std::move(nd));
        }
      spacing = std::max(spacing, kTwoPi / r0.nodes.size());
    }
  }
  m.total_mass = mass;
  m.node_spacing = spacing;
  return m;
}

}  // namespace

WeightedMeasure build_measure(const CompactSet& set, const DensitySpec& density,
                              const WeightSpec& weight, int quad_order) {
  if (quad_order < 1) throw GeometryError("build_measure: quad_order >= 1 required");
  WeightedMeasure m = assemble(set, density, weight, quad_order);
  // resolution heuristic: mass must be stable under order doubling
  WeightedMeasure m2 = assemble(set, density, weight, 2 * quad_order);
  double rel = std::abs(m.total_mass - m2.total_mass) / std::max(1e-300, std::abs(m2.total_mass));
  if (rel > 1e-6)
    throw GeometryError("build_measure: quadrature order too small for declared density "
                        "(relative mass drift " + std::to_string(rel) + ")");
  return m;
}

double WeightedMeasure::integrate(const std::function<double(const Point2&)>& f) const {
  double acc = 0.0;
  for (const auto& nd : nodes) acc += nd.leb_w * nd.rho * f(nd.z);
  return acc;
}

BallMass ball_mass(const WeightedMeasure& m, const Point2& center, double r) {
  if (r <= 0) throw GeometryError("ball_mass: r > 0 required");
  BallMass out;
  for (const auto& nd : m.nodes) {
    if ((nd.z - center).norm() <= r) {
      out.mass += nd.leb_w * nd.rho;
      ++out.node_count;
    }
  }
  out.resolved = (r >= m.node_spacing) && out.node_count >= 4;
  return out;
}

TauCertificate certify_tau(const WeightedMeasure& m, const std::vector<Point2>& centers,
                           const std::vector<double>& radii) {
  TauCertificate cert;
  for (double r : radii) cert.r0 = std::max(cert.r0, r);
  for (const auto& c : centers)
    for (double r : radii) {
      BallMass bm = ball_mass(m, c, r);
      if (!bm.resolved) {
        cert.all_resolved = false;
        continue;
      }
      if (r >= 1.0 || bm.mass <= 0.0) {
        cert.all_resolved = false;
        continue;
      }
      if (bm.mass < 1.0) cert.tau = std::max(cert.tau, std::log(bm.mass) / std::log(r));
    }
  return cert;
}

}  // namespace bk
