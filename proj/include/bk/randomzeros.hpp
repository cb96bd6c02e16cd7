#pragma once

// Random polynomial ensembles, empirical zero measures (optionally on a
// complex line through C^2), and equidistribution statistics against the
// equilibrium measure.

#include <optional>
#include <vector>

#include "bk/envelopes.hpp"
#include "bk/ortho.hpp"
#include "bk/rng.hpp"
#include "bk/roots.hpp"

namespace bk {

struct CoefficientLaw {
  enum class Tag { complex_gaussian, pareto_h1 };
  Tag tag = Tag::complex_gaussian;
  double sigma = 1.0;          // gaussian: E|alpha|^2 = sigma^2
  double r0 = 1.0;             // pareto: plateau cut radius (<= 1)
  double tail_constant = 0.0;  // C with integral_{|z|>r} f <= C / r^2

  double density(Cplx z) const;
  Cplx sample(CounterRng& rng) const;

  static CoefficientLaw gaussian(double sigma = 1.0);
  static CoefficientLaw pareto(double r0 = 1.0);
};

// Measures on a complex plane (ambient z for n=1, or the line parameter t).
struct WeightedAtoms {
  std::vector<Cplx> atoms;
  std::vector<double> weights;
  double total() const;
};

struct EmpiricalZeroMeasure {
  int k = 0;
  WeightedAtoms atoms;  // weight 1/(k deg L) each
  int expected_atoms = 0;
  bool degree_drop = false;
  std::optional<ComplexLine> line;
};

// p = sum_j alpha_j p_j with alpha_j i.i.d. from the law; returned in
// monomial coefficients. Stream = trial_id keeps parallel trials
// order-independent.
Poly sample_poly(const OrthoBasis& B, const CoefficientLaw& law,
                 std::uint64_t seed, std::uint64_t trial_id);

EmpiricalZeroMeasure zero_measure(const Poly& p, int k,
                                  const std::optional<ComplexLine>& line,
                                  const RootsOptions& opt = {});

// Equilibrium reference: circle -> uniform atoms, interval -> arcsine
// quantile atoms, torus2 against a line -> finite-difference Laplacian of
// the envelope oracle along the line.
WeightedAtoms reference_measure(const EnvelopeOracle& oracle,
                                const std::optional<ComplexLine>& line, int resolution = 2048);

// Fixed dictionary of C^2-normalized test functions (gaussian bumps times
// low-order harmonics); pairing against it lower-bounds dist_{-2}.
class Dictionary {
 public:
  struct Member {
    Cplx center;
    double width = 1.0;
    int harmonic = 0;
    bool use_imag = false;  // sin-type member
    double amplitude = 1.0; // certified so the C^2 norm is <= 1
  };

  explicit Dictionary(double window_radius, int min_members = 64);
  double eval(const Member& mb, Cplx z) const;
  std::vector<double> pair_all(const WeightedAtoms& mu) const;
  size_t size() const { return members_.size(); }
  const std::vector<Member>& members() const { return members_; }

 private:
  std::vector<Member> members_;
};

double dist_minus2(const WeightedAtoms& A, const WeightedAtoms& B, const Dictionary& dict);

// (1 / area) integral over the window of |k^{-1} log|p| - V|, with small
// disks around the supplied zeros excised.
struct PotentialL1 {
  double value = 0.0;
  int excised_nodes = 0;
};
PotentialL1 potential_l1(const Poly& p, int k, const EnvelopeOracle& oracle,
                         double window_radius, const std::optional<ComplexLine>& line,
                         const std::vector<Cplx>* zeros = nullptr,
                         double excision_radius = 1e-8);

struct DistanceRecord {
  int k = 0;
  std::uint64_t trial_id = 0;
  std::uint64_t seed = 0;
  double dist2_dictionary = 0.0;
  double potential_l1 = 0.0;
  int atom_count = 0;
};

struct DeviationPoint {
  int k = 0;
  double threshold = 0.0;  // c * log k / k
  double fraction = 0.0;
  double wilson_lo = 0.0, wilson_hi = 0.0;
};

struct DeviationCurve {
  std::vector<DeviationPoint> points;
  double decay_slope = 0.0;  // log fraction vs log k where fractions > 0
};

DeviationCurve deviation_curve(const std::vector<double>& per_trial_l1_by_k_flat,
                               const std::vector<int>& ks, int trials, double c);

}  // namespace bk
