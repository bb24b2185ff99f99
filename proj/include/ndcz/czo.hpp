#pragma once

#include <functional>

#include "ndcz/measure.hpp"

namespace ndcz {

// A singular kernel with its declared size/smoothness constants. Complex
// kernels are handled as two real ones.
struct KernelSpec {
  std::string name;
  int dim = 1;       // 0 = any dimension
  double n = 1.0;    // growth exponent of the size bound
  double c1 = 1.0;   // |k(x,y)| <= c1 / |x-y|^n
  double c2 = 4.0;   // Hoelder constant off the diagonal
  double gamma = 1.0;
  std::function<double(const Point&, const Point&)> eval;
};

KernelSpec hilbert_kernel();
KernelSpec cauchy_re_kernel();
KernelSpec cauchy_im_kernel();
KernelSpec fractional_kernel(double n);  // non-negative kernel 1/|x-y|^n

void register_kernel(const KernelSpec& spec);
// Resolves "hilbert", "cauchy_re", "cauchy_im", "frac_I1" (using the
// measure's growth exponent) or any registered name.
KernelSpec lookup_kernel(const std::string& name, const DiscreteMeasure& m);

// T_eps f(x) = sum over |x-y| > eps of k(x,y) f(y) mass(y), at every atom.
// Built-in kernels ride the vectorized accumulators; everything else runs the
// generic scalar path.
std::vector<double> apply_t_eps(const DiscreteMeasure& m, const KernelSpec& k,
                                const GridFunction& f, double eps);
std::vector<double> apply_t_star(const DiscreteMeasure& m, const KernelSpec& k,
                                 const GridFunction& f, const std::vector<double>& eps_grid);
std::vector<double> default_eps_grid(const DiscreteMeasure& m);  // 12 log-spaced points

struct CzReport {
  int trials = 0;
  double max_size_ratio = 0.0;    // sup |k| * dist^n / c1
  double max_smooth_ratio = 0.0;  // sup of the Hoelder quotient / c2
  Point size_witness_x, size_witness_y;
  bool passed() const { return max_size_ratio <= 1.0 + 1e-9 && max_smooth_ratio <= 1.0 + 1e-9; }
};

// Samples (x, x', y) with |x-x'| <= |x-y|/2 in a box of the given scale and
// checks both displayed kernel conditions against the declared constants.
CzReport check_cz_conditions(const KernelSpec& k, int trials, Rng& rng,
                             double domain_scale = 1.0);

// Rayleigh-quotient power iteration on T_eps^* T_eps in L^2(mu); an empirical
// report, never an enforced assumption.
double l2_norm_estimate(const DiscreteMeasure& m, const KernelSpec& k, double eps, int iters,
                        Rng& rng);

}  // namespace ndcz
