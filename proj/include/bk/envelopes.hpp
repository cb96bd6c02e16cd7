#pragma once

// Extremal function machinery: closed-form envelope oracles, the degree-k
// polynomial (Chebyshev-type) envelope approximant via linear programming,
// convergence-rate bookkeeping for the kernel estimator, and Markov factors.

#include <functional>
#include <string>
#include <vector>

#include "bk/geometry.hpp"
#include "bk/kernels.hpp"
#include "bk/rng.hpp"

namespace bk {

struct EnvelopeOracle {
  std::string set_id;
  std::string formula;
  std::function<double(const Point2&)> value;

  double operator()(const Point2& z) const { return value(z); }
};

// Catalog pairs with known closed forms: (circle, Q=0), (interval, Q=0),
// (torus2, Q=0).
EnvelopeOracle envelope_oracle(const CompactSet& set, const WeightSpec& weight);

struct ChebyshevEnvelopeOptions {
  int constraint_nodes_per_dim = 0;  // 0: use 8k
  int phase_count = 32;
  double lp_tol = 1e-10;
};

// (1/k) log of the largest |sigma(z)| over polynomials sigma of degree <= k
// with the linearized constraint |sigma| <= e^{kQ} on the constraint grid.
double chebyshev_envelope(const WeightedMeasure& m, int k, const Point2& z,
                          const ChebyshevEnvelopeOptions& opt = {});

// Ambient diagnostic grid: rings around the set at the catalog radii
// {0.5, 0.9, 1.0, 1.1, 1.5, 2, 5, 10}.
std::vector<Point2> ring_grid(const CompactSet& set, int angular = 256);

struct RateRecord {
  int k = 0;
  double e_k = 0.0;     // sup grid error of (1/2k) log Btilde_k vs oracle
  double scaled = 0.0;  // e_k * k / log k
};

struct RateSummary {
  std::vector<RateRecord> records;
  double max_scaled = 0.0;
  double min_scaled = 0.0;
  double c_fit = 0.0;   // max_k e_k * k / log k
  bool bounded = false; // max/min <= 4 over the supplied k
};

RateSummary convergence_rate(const EnvelopeOracle& oracle,
                             const std::vector<std::pair<int, const OrthoBasis*>>& bases,
                             const WeightedMeasure& m, int angular = 256);

struct MarkovResult {
  double factor = 0.0;          // max over tested p of sup|grad p| / sup|p|
  double factor_over_k = 0.0;
  double factor_over_k2 = 0.0;
};

// Random-coefficient trials plus the catalog extremal polynomials
// (z^k on the circle, T_k on the interval, T_{k/4}(2 z^4 - 1) on the
// right-angle arc union).
MarkovResult markov_factor(const CompactSet& set, int k, int trials, std::uint64_t seed);

// Monomial coefficients of the Chebyshev polynomial T_k.
Poly chebyshev_t(int k);

}  // namespace bk
