#pragma once

// Simultaneous root extraction for univariate complex polynomials
// (Aberth-Ehrlich iteration).

#include <stdexcept>
#include <vector>

#include "bk/poly.hpp"

namespace bk {

struct RootSet {
  std::vector<Cplx> roots;
  double residual = 0.0;  // max backward error |p(root)| / sum_j |c_j| |root|^j
  int iterations = 0;
};

struct RootsError : std::runtime_error {
  RootSet partial;
  RootsError(const std::string& msg, RootSet p) : std::runtime_error(msg), partial(std::move(p)) {}
};

struct RootsOptions {
  double tol = 1e-13;      // relative Newton-step stopping tolerance
  int max_iterations = 400;
  double strip_threshold = 1e-300;  // leading coefficients below this * max are dropped
};

RootSet roots(const Poly& q, const RootsOptions& opt = {});

}  // namespace bk
