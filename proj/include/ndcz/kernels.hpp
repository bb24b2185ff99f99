#pragma once

#include "ndcz/lattice.hpp"

namespace ndcz {

struct KernelLemmaReport {
  int samples = 0;
  int support_violations = 0;      // nonzero s_k(x,y) with x outside Q_{y,k-2}
  int quasi_symmetry_failures = 0; // positive numerator over a vanishing sum
  double max_quasi_symmetry = 0.0; // observed constant in the three-term bound
  double max_gradient_constant = 0.0;
};

// The approximation-of-identity kernels attached to a lattice. At atom x and
// scale k, with l = l(Q_{x,k}) and L = l(Q_{x,k-1}):
//   s(t) = cut(t) / (A * max(t, r_core)^n),  r_core = max(l, r_floor)/2
// exact on radii [r_core, sqrt(d) L/2], tapering C^1 to zero at L. Scale 0
// treats the previous cube as the whole space (no taper). Once the previous
// cube is a point the kernel vanishes identically.
class KernelProfile {
 public:
  explicit KernelProfile(const Lattice& lat, bool use_lipschitz = false);

  const Lattice& lattice() const { return *lat_; }
  const DiscreteMeasure& measure() const { return lat_->measure(); }
  double a_constant() const { return lat_->a_constant(); }
  bool lipschitz() const { return lipschitz_; }

  double side(std::size_t atom, int k) const;
  bool profile(std::size_t atom, int k, simd::RadialProfile* out) const;
  double s_eval(std::size_t atom, int k, const Point& y) const;

  std::vector<double> apply(int k, const GridFunction& f) const;          // S_k f
  std::vector<double> apply_adjoint(int k, const GridFunction& f) const;  // S_k^* f
  // With a raw value array (aligned with atoms, not premultiplied by masses).
  std::vector<double> apply_values(int k, const std::vector<double>& values) const;

  double kernel_mass(std::size_t atom, int k) const;          // integral of s_k(x,.) dmu
  double adjoint_kernel_mass(std::size_t atom, int k) const;  // integral of s_k(.,z) dmu

  KernelLemmaReport check_lemmas(int trials, Rng& rng) const;

 private:
  const Lattice* lat_;
  bool lipschitz_;
  mutable std::vector<std::vector<double>> psi_;  // lazily filled per scale
  const std::vector<double>& psi_for(int k) const;
};

}  // namespace ndcz
