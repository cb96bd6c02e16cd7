#pragma once

// Quadrature rules used by the geometry module: Gauss-Legendre (with an
// extended-precision variant for Gram assembly), periodic trapezoid, and
// geometrically graded panel meshes for densities with point singularities.

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "bk/mp.hpp"

namespace bk {

struct Rule1d {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// n-point Gauss-Legendre on [-1, 1].
Rule1d gauss_legendre(int n);

// Affine image of a rule on [lo, hi].
Rule1d map_rule(const Rule1d& r, double lo, double hi);

// Periodic trapezoid on [a, b): n equispaced nodes, weight (b-a)/n each.
Rule1d trapezoid_periodic(int n, double a, double b);

// Extended-precision Gauss-Legendre nodes/weights on [-1, 1]
// (Newton refinement of the double-precision nodes at `prec` bits).
void gauss_legendre_mp(int n, mpfr_prec_t prec,
                       std::vector<mp::Real>& nodes, std::vector<mp::Real>& weights);

// Panel mesh on [a, b], uniform away from singular breakpoints and
// geometrically graded (ratio 1/2, `levels` levels) toward them.
// `singular` entries must lie in [a, b]; interior ones split the interval.
std::vector<std::pair<double, double>> graded_panels(double a, double b,
                                                     std::vector<double> singular,
                                                     int base_panels, int levels = 60);

// Composite Gauss-Legendre over a panel mesh, q points per panel.
Rule1d composite_gl(const std::vector<std::pair<double, double>>& panels, int q);

}  // namespace bk
