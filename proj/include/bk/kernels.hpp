#pragma once

// Bergman kernel function B_k, its weight-free variant, suprema over K,
// and growth-exponent fits.

#include <cstdint>
#include <vector>

#include "bk/geometry.hpp"
#include "bk/ortho.hpp"

namespace bk {

struct BergmanValue {
  double b_tilde = 0.0;      // sum_j |p_j(x)|^2 (may overflow to inf off K)
  double log_b_tilde = 0.0;  // always finite for nonzero bases
  double b_k = 0.0;          // b_tilde * e^{-2 k Q(x)}
};

BergmanValue bergman_at(const OrthoBasis& B, const WeightedMeasure& m, const Point2& x);

struct KernelProfile {
  int k = 0;
  std::vector<std::pair<Point2, BergmanValue>> values;
  double sup_on_K = 0.0;
  std::string eval_grid_id;
  std::uint64_t basis_fingerprint = 0;
};

// Max of B_k over a K-grid with >= ceil(8k * grid_scale) points per patch
// dimension, plus golden-section polish around the top grid maxima.
double sup_bergman(const OrthoBasis& B, const WeightedMeasure& m, double grid_scale = 1.0);

// trace(T G2 T^*) with an independent double-order quadrature; equals
// integral of B_k d(mu) and hence d_k up to quadrature error.
double bergman_trace(const OrthoBasis& B, const WeightedMeasure& m, int k);

std::uint64_t basis_fingerprint(const OrthoBasis& B);

struct GrowthFit {
  std::vector<int> ks;
  std::vector<double> sups;
  double fitted_exponent = 0.0;
  double ci_halfwidth = 0.0;
  double bound_exponent = 0.0;
  bool pass = false;
};

// Least-squares slope of log(sup) against log(k); pass when the slope is
// below bound_exponent + ci_halfwidth.
GrowthFit growth_fit(const std::vector<std::pair<int, double>>& k_sup, double bound_exponent);

}  // namespace bk
