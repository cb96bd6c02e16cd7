#include "bk/randomzeros.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bk/quadrature.hpp"

namespace bk {

CoefficientLaw CoefficientLaw::gaussian(double sigma) {
  if (sigma <= 0) throw std::invalid_argument("CoefficientLaw::gaussian: sigma must be positive");
  CoefficientLaw law;
  law.tag = Tag::complex_gaussian;
  law.sigma = sigma;
  // sup_r r^2 e^{-r^2/sigma^2} = sigma^2 / e, so tail(r) <= (sigma^2/e)/r^2
  law.tail_constant = sigma * sigma / std::exp(1.0);
  return law;
}

CoefficientLaw CoefficientLaw::pareto(double r0) {
  if (r0 <= 0 || r0 > 1.0)
    throw std::invalid_argument("CoefficientLaw::pareto: r0 must lie in (0, 1]");
  CoefficientLaw law;
  law.tag = Tag::pareto_h1;
  law.r0 = r0;
  // plateau height c = 1/(2 pi r0^2); tail(r) = r0^2/(2 r^2) for r >= r0,
  // and (1 - r^2/(2 r0^2)) r^2 <= r0^2/2 below, so the same constant works.
  law.tail_constant = 0.5 * r0 * r0;
  return law;
}

double CoefficientLaw::density(Cplx z) const {
  double r2 = std::norm(z);
  if (tag == Tag::complex_gaussian) {
    double s2 = sigma * sigma;
    return std::exp(-r2 / s2) / (M_PI * s2);
  }
  double c = 1.0 / (2.0 * M_PI * r0 * r0);
  double q = r0 * r0 / std::max(r2, r0 * r0);
  return c * q * q;
}

Cplx CoefficientLaw::sample(CounterRng& rng) const {
  if (tag == Tag::complex_gaussian) return rng.next_gaussian(sigma);
  double u = rng.next_uniform();
  double r = u < 0.5 ? r0 * std::sqrt(2.0 * u) : r0 / std::sqrt(2.0 * (1.0 - u));
  return std::polar(r, 2.0 * M_PI * rng.next_uniform());
}

double WeightedAtoms::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Poly sample_poly(const OrthoBasis& B, const CoefficientLaw& law,
                 std::uint64_t seed, std::uint64_t trial_id) {
  if (!B.double_safe)
    throw std::runtime_error(
        "sample_poly: basis transform overflows double; re-run at lower degree or on a "
        "better-conditioned set");
  int d = poly_dim(B.nvars, B.k);
  CounterRng rng(seed, trial_id);
  Eigen::VectorXcd alpha(d);
  for (int j = 0; j < d; ++j) alpha(j) = law.sample(rng);
  Poly p(B.nvars, B.k);
  // row j of T holds the monomial coefficients of p_j
  p.coeffs = B.transform.transpose() * alpha;
  return p;
}

EmpiricalZeroMeasure zero_measure(const Poly& p, int k,
                                  const std::optional<ComplexLine>& line,
                                  const RootsOptions& opt) {
  EmpiricalZeroMeasure out;
  out.k = k;
  out.line = line;
  out.expected_atoms = k;  // deg L = 1
  Poly q = p;
  if (p.nvars == 2) {
    if (!line) throw std::invalid_argument("zero_measure: a complex line is required in C^2");
    q = restrict_to_line(p, *line);
  }
  RootSet rs = roots(q, opt);
  out.atoms.atoms = rs.roots;
  out.atoms.weights.assign(rs.roots.size(), 1.0 / double(k));
  out.degree_drop = static_cast<int>(rs.roots.size()) < k;
  return out;
}

WeightedAtoms reference_measure(const EnvelopeOracle& oracle,
                                const std::optional<ComplexLine>& line, int resolution) {
  WeightedAtoms out;
  if (oracle.set_id == "circle") {
    // recover the radius from the oracle itself: V(R) = log(R/r) for R > r
    Point2 probe;
    probe.setZero();
    probe(0) = 100.0;
    double r = 100.0 / std::exp(oracle(probe));
    for (int i = 0; i < resolution; ++i) {
      out.atoms.push_back(std::polar(r, 2.0 * M_PI * (i + 0.5) / resolution));
      out.weights.push_back(1.0 / resolution);
    }
    return out;
  }
  if (oracle.set_id == "interval") {
    // arcsine quantiles: equal-mass atoms at cos(pi (i + 1/2) / N)
    for (int i = 0; i < resolution; ++i) {
      out.atoms.push_back(std::cos(M_PI * (i + 0.5) / resolution));
      out.weights.push_back(1.0 / resolution);
    }
    return out;
  }
  if (oracle.set_id == "torus2") {
    if (!line)
      throw std::invalid_argument("reference_measure: torus2 reference needs a complex line");
    // 5-point finite-difference Laplacian of V restricted to the line; the
    // positive cells carry the slice of dd^c V, normalized to unit mass.
    int g = std::max(64, resolution / 8);
    double R = 3.4;
    double h = 2.0 * R / g;
    std::vector<double> V(size_t(g + 1) * (g + 1));
    auto at = [&](int i, int j) -> double& { return V[size_t(i) * (g + 1) + j]; };
    for (int i = 0; i <= g; ++i)
      for (int j = 0; j <= g; ++j) {
        Cplx t(-R + h * i, -R + h * j);
        at(i, j) = oracle(line->point(t));
      }
    double mass_sum = 0.0;
    for (int i = 1; i < g; ++i)
      for (int j = 1; j < g; ++j) {
        double lap = at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j);
        if (lap <= 0) continue;
        double mass = lap / (2.0 * M_PI);  // (Delta V) h^2 / (2 pi), with h^2 folded in
        out.atoms.push_back(Cplx(-R + h * i, -R + h * j));
        out.weights.push_back(mass);
        mass_sum += mass;
      }
    if (mass_sum <= 0)
      throw std::runtime_error("reference_measure: degenerate Laplacian on the supplied line");
    for (double& w : out.weights) w /= mass_sum;
    return out;
  }
  throw std::invalid_argument("reference_measure: no catalog reference for set " + oracle.set_id);
}

Dictionary::Dictionary(double window_radius, int min_members) {
  double Rw = window_radius;
  std::vector<Cplx> centers{0.0};
  for (double frac : {0.5, 1.0})
    for (int a = 0; a < 8; ++a) centers.push_back(std::polar(frac * Rw, 2.0 * M_PI * a / 8.0));
  std::vector<double> widths{0.2 * std::max(1.0, Rw / 2.0), 0.5 * std::max(1.0, Rw / 2.0)};

  for (const Cplx& ctr : centers)
    for (double s : widths)
      for (int m = 0; m <= 2; ++m)
        for (int im = 0; im <= (m > 0 ? 1 : 0); ++im) {
          Member mb;
          mb.center = ctr;
          mb.width = s;
          mb.harmonic = m;
          mb.use_imag = im != 0;
          mb.amplitude = 1.0;
          // certify the C^2 norm by sampled central differences, then
          // rescale with a safety margin so the norm is at most 1
          double d = s / 16.0;
          double mx = 0.0;
          int span = 64;  // covers |w| <= 4s where the bump lives
          for (int i = -span; i <= span; ++i)
            for (int j = -span; j <= span; ++j) {
              Cplx w = mb.center + Cplx(i * d, j * d);
              double f0 = eval(mb, w);
              double fe = eval(mb, w + Cplx(d, 0)), fw = eval(mb, w - Cplx(d, 0));
              double fn = eval(mb, w + Cplx(0, d)), fs = eval(mb, w - Cplx(0, d));
              double fne = eval(mb, w + Cplx(d, d)), fsw = eval(mb, w - Cplx(d, d));
              double fnw = eval(mb, w + Cplx(-d, d)), fse = eval(mb, w + Cplx(d, -d));
              mx = std::max({mx, std::abs(f0), std::abs(fe - fw) / (2 * d),
                             std::abs(fn - fs) / (2 * d), std::abs(fe - 2 * f0 + fw) / (d * d),
                             std::abs(fn - 2 * f0 + fs) / (d * d),
                             std::abs(fne - fnw - fse + fsw) / (4 * d * d)});
            }
          if (mx > 0) mb.amplitude = 0.9 / mx;
          members_.push_back(mb);
        }
  if (static_cast<int>(members_.size()) < min_members)
    throw std::runtime_error("Dictionary: fewer members than requested minimum");
}

double Dictionary::eval(const Member& mb, Cplx z) const {
  Cplx w = z - mb.center;
  double s2 = mb.width * mb.width;
  double g = std::exp(-std::norm(w) / (2.0 * s2));
  if (mb.harmonic == 0) return mb.amplitude * g;
  Cplx wm = w;
  for (int i = 1; i < mb.harmonic; ++i) wm *= w;
  wm /= std::pow(mb.width, mb.harmonic);
  return mb.amplitude * g * (mb.use_imag ? wm.imag() : wm.real());
}

std::vector<double> Dictionary::pair_all(const WeightedAtoms& mu) const {
  std::vector<double> out(members_.size(), 0.0);
  for (size_t m = 0; m < members_.size(); ++m)
    for (size_t i = 0; i < mu.atoms.size(); ++i)
      out[m] += mu.weights[i] * eval(members_[m], mu.atoms[i]);
  return out;
}

double dist_minus2(const WeightedAtoms& A, const WeightedAtoms& B, const Dictionary& dict) {
  auto pa = dict.pair_all(A);
  auto pb = dict.pair_all(B);
  double d = 0.0;
  for (size_t m = 0; m < pa.size(); ++m) d = std::max(d, std::abs(pa[m] - pb[m]));
  return d;
}

PotentialL1 potential_l1(const Poly& p, int k, const EnvelopeOracle& oracle,
                         double window_radius, const std::optional<ComplexLine>& line,
                         const std::vector<Cplx>* zeros, double excision_radius) {
  Poly q = p;
  if (p.nvars == 2) {
    if (!line) throw std::invalid_argument("potential_l1: a complex line is required in C^2");
    q = restrict_to_line(p, *line);
  }
  auto V = [&](Cplx t) {
    if (line) return oracle(line->point(t));
    Point2 z;
    z.setZero();
    z(0) = t;
    return oracle(z);
  };

  Rule1d radial = map_rule(gauss_legendre(64), 0.0, window_radius);
  const int ntheta = 128;
  double integral = 0.0;
  PotentialL1 out;
  for (int i = 0; i < static_cast<int>(radial.nodes.size()); ++i) {
    double r = radial.nodes[i];
    double wr = radial.weights[i] * r * (2.0 * M_PI / ntheta);
    for (int j = 0; j < ntheta; ++j) {
      Cplx t = std::polar(r, 2.0 * M_PI * (j + 0.5) / ntheta);
      if (zeros) {
        bool excise = false;
        for (const Cplx& z0 : *zeros)
          if (std::abs(t - z0) < excision_radius) {
            excise = true;
            break;
          }
        if (excise) {
          ++out.excised_nodes;
          continue;
        }
      }
      double a = std::abs(eval(q, t));
      if (a <= 0 || !std::isfinite(a)) {
        ++out.excised_nodes;
        continue;
      }
      integral += wr * std::abs(std::log(a) / double(k) - V(t));
    }
  }
  out.value = integral / (M_PI * window_radius * window_radius);
  return out;
}

DeviationCurve deviation_curve(const std::vector<double>& per_trial_l1_by_k_flat,
                               const std::vector<int>& ks, int trials, double c) {
  if (per_trial_l1_by_k_flat.size() != ks.size() * size_t(trials))
    throw std::invalid_argument("deviation_curve: flat array size mismatch");
  DeviationCurve out;
  const double zq = 1.959963984540054;  // 95% two-sided normal quantile
  std::vector<double> lx, ly;
  for (size_t ki = 0; ki < ks.size(); ++ki) {
    DeviationPoint pt;
    pt.k = ks[ki];
    pt.threshold = c * std::log(double(pt.k)) / double(pt.k);
    int cnt = 0;
    for (int t = 0; t < trials; ++t)
      if (per_trial_l1_by_k_flat[ki * trials + t] >= pt.threshold) ++cnt;
    double n = trials, ph = cnt / n;
    pt.fraction = ph;
    double denom = 1.0 + zq * zq / n;
    double center = (ph + zq * zq / (2 * n)) / denom;
    double half = zq * std::sqrt(ph * (1 - ph) / n + zq * zq / (4 * n * n)) / denom;
    pt.wilson_lo = std::max(0.0, center - half);
    pt.wilson_hi = std::min(1.0, center + half);
    out.points.push_back(pt);
    if (ph > 0) {
      lx.push_back(std::log(double(pt.k)));
      ly.push_back(std::log(ph));
    }
  }
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    double n = double(lx.size());
    out.decay_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

}  // namespace bk
