#pragma once

// L^2(mu, kQ) orthonormal polynomial bases: extended-precision Gram
// assembly (with structure-exploiting fast paths per catalog set) and
// unpivoted Cholesky, preserving the degree filtration.

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>
#include <vector>

#include "bk/geometry.hpp"
#include "bk/indexing.hpp"
#include "bk/mp.hpp"

namespace bk {

struct OrthoError : std::runtime_error {
  int failing_index = -1;
  OrthoError(const std::string& msg, int idx = -1) : std::runtime_error(msg), failing_index(idx) {}
};

// Dense complex matrix of mp values, row-major.
class MpMatrix {
 public:
  MpMatrix(int n, mpfr_prec_t prec) : n_(n), prec_(prec), data_(size_t(n) * n, mp::Complex(prec)) {}
  int dim() const { return n_; }
  mpfr_prec_t prec() const { return prec_; }
  mp::Complex& at(int i, int j) { return data_[size_t(i) * n_ + j]; }
  const mp::Complex& at(int i, int j) const { return data_[size_t(i) * n_ + j]; }

 private:
  int n_;
  mpfr_prec_t prec_;
  std::vector<mp::Complex> data_;
};

struct GramMatrix {
  int k = 0;
  int nvars = 1;
  // precision_bits <= 64 runs on the double backend (Eigen storage and
  // LLT); above that, MPFR storage and the extended-precision Cholesky.
  bool double_backend = false;
  std::shared_ptr<MpMatrix> entries;  // mp backend
  Eigen::MatrixXcd entries_d;         // double backend
  int precision_bits = 256;
  int assembly_node_count = 0;
};

struct OrthoBasis {
  int k = 0;
  int nvars = 1;
  // Lower-triangular T = L^{-1}: row j holds the monomial coefficients of
  // the j-th orthonormal polynomial p_j.
  std::shared_ptr<MpMatrix> transform_mp;
  Eigen::MatrixXcd transform;  // double down-convert of T
  bool double_safe = true;     // transform usable in double without overflow
  int precision_bits = 256;
  double cond_estimate = 1.0;  // (max diag L / min diag L)^2
  double log10_cond = 0.0;
};

// Requires the measure's quadrature to resolve degree-2k products; if the
// stored order is below 4k+16 the measure is re-quadratured internally.
GramMatrix gram(const WeightedMeasure& m, int k, int precision_bits);

OrthoBasis orthonormalize(const GramMatrix& G);

// Max |<p_i, p_j> - delta_ij| recomputed with an independent quadrature at
// double the order.
double verify_orthonormality(const OrthoBasis& B, const WeightedMeasure& m, int k);

// gram + orthonormalize with precision escalation (x2 per breakdown).
OrthoBasis build_basis(const WeightedMeasure& m, int k, int precision_bits,
                       int max_bits = 4096);

// Heuristic starting precision for a catalog set at degree k.
int suggest_precision_bits(const std::string& set_id, int k, int requested);

}  // namespace bk
