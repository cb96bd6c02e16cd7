#pragma once

// Catalog of compact totally real sets in C^1 / C^2, weighted measures on
// them, and the quadrature backing all integrals.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bk/poly.hpp"
#include "bk/quadrature.hpp"

namespace bk {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Patch {
  enum class Kind { circle_arc, segment, polar_curve, torus_grid };
  Kind kind;
  int param_dim = 1;
  Eigen::Vector2d lo{0, 0}, hi{0, 0};
  bool periodic = false;

  double radius = 1.0;              // circle_arc, torus_grid
  Cplx seg_a{0, 0}, seg_b{1, 0};    // segment endpoints
  Eigen::VectorXd polar_coeffs;     // r(t) = c0 + sum_j c_{2j-1} cos(jt) + c_{2j} sin(jt)

  Point2 chart(const Eigen::Vector2d& t) const;
  double jacobian_factor(const Eigen::Vector2d& t) const;

  double polar_radius(double t) const;
  double polar_radius_deriv(double t) const;
};

struct CompactSet {
  std::string id;  // circle | interval | jordan_curve | torus2 | arc_union
  int ambient_dim = 1;
  int set_dim = 1;
  std::vector<Patch> patches;
  std::vector<Point2> singular_points;
};

struct SetSpec {
  std::string tag;
  double radius = 1.0;                  // circle
  double arc_angle = M_PI / 2;          // arc_union: angle between the arcs
  std::vector<double> polar_coeffs;     // jordan_curve
};

CompactSet build_set(const SetSpec& spec);

struct DensitySpec {
  enum class Kind { constant, singular, smoothed_indicator };
  Kind kind = Kind::constant;
  double constant = 1.0;
  Cplx z0{1.0, 0.0};       // singular: rho = constant * |z - z0|^exponent
  double exponent = 1.0;
  double lambda = 0.0;     // declared: largest lambda with rho^{-lambda} integrable
  double ind_center = 0.0; // smoothed_indicator (parameter-space bump)
  double ind_width = M_PI;
  double ind_sharp = 8.0;
  double ind_floor = 1e-3;

  double eval(const Point2& z, const Eigen::Vector2d& param) const;
};

struct WeightSpec {
  enum class Kind { zero, re_z, holder_bump };
  Kind kind = Kind::zero;
  double alpha = 1.0;      // declared Hoelder exponent
  Cplx z0{1.0, 0.0};       // holder_bump: amplitude * |z - z0|^alpha
  double amplitude = 0.2;

  // Catalog weights come with global formulas, so Q extends to all of C^n.
  double eval(const Point2& z) const;
};

// Recipe for rebuilding a patch's 1-D parameter rule (possibly at higher
// order or extended precision) without re-deriving the panel structure.
struct QuadRecipe {
  enum class Kind { trapezoid, gauss, panels };
  Kind kind = Kind::gauss;
  int n = 0;       // trapezoid/gauss point count
  int panel_q = 16;
  std::vector<std::pair<double, double>> panels;
  double a = 0.0, b = 0.0;
};

struct WeightedMeasure {
  CompactSet set;
  DensitySpec density;
  WeightSpec weight;
  int quad_order = 0;

  struct Node {
    Eigen::Vector2d param;
    Point2 z;
    double leb_w;   // quadrature weight including the jacobian factor
    double rho;
    double q;       // weight Q at the node
    int patch;
  };
  std::vector<Node> nodes;
  // per-patch recipes; torus patches carry one recipe per parameter axis
  std::vector<std::vector<QuadRecipe>> recipes;

  double total_mass = 0.0;
  double node_spacing = 0.0;  // typical chart-space spacing away from grading

  double integrate(const std::function<double(const Point2&)>& f) const;
};

WeightedMeasure build_measure(const CompactSet& set, const DensitySpec& density,
                              const WeightSpec& weight, int quad_order);

struct BallMass {
  double mass = 0.0;
  bool resolved = false;
  int node_count = 0;
};

BallMass ball_mass(const WeightedMeasure& m, const Point2& center, double r);

struct TauCertificate {
  double tau = 0.0;
  double r0 = 0.0;
  bool all_resolved = true;
};

// Smallest exponent tau with mass(z, r) >= r^tau over the probe grid.
TauCertificate certify_tau(const WeightedMeasure& m, const std::vector<Point2>& centers,
                           const std::vector<double>& radii);

}  // namespace bk
