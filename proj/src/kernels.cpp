#include "ndcz/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ndcz {

KernelProfile::KernelProfile(const Lattice& lat, bool use_lipschitz)
    : lat_(&lat), lipschitz_(use_lipschitz) {
  psi_.resize(lat.k_max() + 1);
}

const std::vector<double>& KernelProfile::psi_for(int k) const {
  if (psi_[k].empty()) psi_[k] = lat_->lipschitz_sides(k);
  return psi_[k];
}

double KernelProfile::side(std::size_t atom, int k) const {
  if (lipschitz_) return psi_for(k)[atom];
  return lat_->side(atom, k);
}

bool KernelProfile::profile(std::size_t atom, int k, simd::RadialProfile* out) const {
  const DiscreteMeasure& m = measure();
  const int d = m.dim();
  if (d > 3) throw std::invalid_argument("kernels: profiles defined for d <= 3");
  const double inf = std::numeric_limits<double>::infinity();
  double l_prev = inf;
  if (k >= 1) {
    l_prev = side(atom, k - 1);
    if (l_prev == 0.0) return false;  // previous cube is a point
  }
  const double l_here = side(atom, k);
  out->r_core = std::max(l_here, m.resolution_floor()) / 2.0;
  out->r_out = k >= 1 ? std::sqrt(double(d)) * l_prev / 2.0 : inf;
  out->r_supp = k >= 1 ? l_prev : inf;
  out->inv_a = 1.0 / a_constant();
  out->n = m.growth_exponent();
  return true;
}

double KernelProfile::s_eval(std::size_t atom, int k, const Point& y) const {
  simd::RadialProfile p;
  if (!profile(atom, k, &p)) return 0.0;
  return simd::radial_profile_value(euclid_dist(measure().atom(atom), y), p);
}

std::vector<double> KernelProfile::apply_values(int k, const std::vector<double>& values) const {
  const DiscreteMeasure& m = measure();
  std::vector<double> folded(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) folded[i] = values[i] * m.mass(i);
  std::vector<double> out(m.atom_count(), 0.0);
  simd::RadialProfile p;
  for (std::size_t i = 0; i < m.atom_count(); ++i)
    if (profile(i, k, &p)) out[i] = m.radial_profile_sum(folded, m.atom(i), p);
  return out;
}

std::vector<double> KernelProfile::apply(int k, const GridFunction& f) const {
  if (&f.measure() != &measure())
    throw std::invalid_argument("kernels: function and lattice use different measures");
  return apply_values(k, f.values());
}

std::vector<double> KernelProfile::apply_adjoint(int k, const GridFunction& f) const {
  if (&f.measure() != &measure())
    throw std::invalid_argument("kernels: function and lattice use different measures");
  const DiscreteMeasure& m = measure();
  std::vector<double> out(m.atom_count(), 0.0);
  std::vector<double> eu;
  simd::RadialProfile p;
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    if (!profile(i, k, &p)) continue;
    const double w = f[i] * m.mass(i);
    if (w == 0.0) continue;
    m.distances_to(m.atom(i), eu);
    for (std::size_t j = 0; j < m.atom_count(); ++j)
      if (eu[j] <= p.r_supp) out[j] += w * simd::radial_profile_value(eu[j], p);
  }
  return out;
}

double KernelProfile::kernel_mass(std::size_t atom, int k) const {
  simd::RadialProfile p;
  if (!profile(atom, k, &p)) return 0.0;
  return measure().radial_profile_sum(measure().masses(), measure().atom(atom), p);
}

double KernelProfile::adjoint_kernel_mass(std::size_t atom, int k) const {
  const DiscreteMeasure& m = measure();
  const Point z = m.atom(atom);
  double acc = 0.0;
  simd::RadialProfile p;
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    if (!profile(i, k, &p)) continue;
    acc += m.mass(i) * simd::radial_profile_value(euclid_dist(m.atom(i), z), p);
  }
  return acc;
}

KernelLemmaReport KernelProfile::check_lemmas(int trials, Rng& rng) const {
  const DiscreteMeasure& m = measure();
  KernelLemmaReport rep;
  const int k_hi = lat_->k_max();
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t x = uniform_index(rng, m.atom_count());
    const std::size_t y = uniform_index(rng, m.atom_count());
    const int k = 1 + static_cast<int>(uniform_index(rng, std::max(1, k_hi - 1)));
    ++rep.samples;

    // support in the first variable: s_k(., y) lives inside Q_{y, k-2}
    if (k >= 2) {
      const double v = s_eval(x, k, m.atom(y));
      if (v != 0.0 && !lat_->cube(y, k - 2).contains(m.atom(x))) ++rep.support_violations;
    }

    // quasi-symmetry against the three adjacent adjoint scales
    if (k + 1 <= k_hi) {
      const double num = s_eval(x, k, m.atom(y));
      if (num > 0.0) {
        const double den = s_eval(y, k - 1, m.atom(x)) + s_eval(y, k, m.atom(x)) +
                           s_eval(y, k + 1, m.atom(x));
        if (den <= 0.0)
          ++rep.quasi_symmetry_failures;
        else
          rep.max_quasi_symmetry = std::max(rep.max_quasi_symmetry, num / den);
      }
    }

    // finite-difference gradient in y against the scale/distance envelope
    simd::RadialProfile p;
    if (profile(x, k, &p) && std::isfinite(p.r_supp)) {
      const Point cx = m.atom(x);
      const double t = uniform(rng, p.r_core * 0.5, p.r_supp * 1.02);
      Point y0 = cx;
      y0[0] += t;
      const double h = 1e-6 * std::max(t, p.r_core);
      Point ya = y0, yb = y0;
      ya[0] -= h;
      yb[0] += h;
      const double g = std::abs(s_eval(x, k, yb) - s_eval(x, k, ya)) / (2.0 * h);
      const double l_here = std::max(side(x, k), m.resolution_floor());
      const double envelope =
          std::min(1.0 / std::pow(l_here, p.n + 1.0), 1.0 / std::pow(t, p.n + 1.0)) /
          a_constant();
      if (envelope > 0.0)
        rep.max_gradient_constant = std::max(rep.max_gradient_constant, g / envelope);
    }
  }
  return rep;
}

}  // namespace ndcz
