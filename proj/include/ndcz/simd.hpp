#pragma once

#include <cstddef>
#include <string>

namespace ndcz::simd {

// Structure-of-arrays view over a contiguous run of atoms. coord[t] points at
// the t-th coordinate array; weight carries masses or premultiplied f*mass.
struct AtomBlock {
  const double* coord[4] = {nullptr, nullptr, nullptr, nullptr};
  const double* weight = nullptr;
  std::size_t count = 0;
  int dim = 1;
};

// Piecewise radial bump used by the approximation-of-identity operators:
//   s(t) = cut(t) / (A * max(t, r_core)^n)
// with cut == 1 on [0, r_out], a C^1 cubic fall to 0 on [r_out, r_supp], and
// 0 beyond. r_out == +inf disables the taper.
struct RadialProfile {
  double r_core = 0.0;
  double r_out = 0.0;
  double r_supp = 0.0;
  double inv_a = 0.0;  // 1/A
  double n = 1.0;      // growth exponent
};

// Accumulation kernels. Each has a scalar reference implementation and an
// AVX2 variant; the active one is picked at runtime.
//
// sum_in_ball        : sum of w_i over ||a_i - c||_2 <= r
// sum_in_cube        : sum of w_i over ||a_i - c||_inf <= h
// sum_invpow_shell   : sum of w_i / ||a_i - c||_2^n over h_in < ||a_i - c||_inf <= h_out
// sum_invpow_annulus : sum of w_i / ||a_i - c||_2^n over r_in < ||a_i - c||_2 <= r_out
// sum_radial_profile : sum of w_i * s(||a_i - c||_2)
// sum_hilbert        : (d=1) sum of w_i / (x - a_i) over |x - a_i| > eps
// sum_cauchy         : (d=2) real/imag parts of sum of w_i / ((c - a_i) as complex), dist > eps
// euclid_distances   : fills out[i] = ||a_i - c||_2
struct Kernels {
  double (*sum_in_ball)(const AtomBlock&, const double* c, double r);
  double (*sum_in_cube)(const AtomBlock&, const double* c, double h);
  double (*sum_invpow_shell)(const AtomBlock&, const double* c, double h_in, double h_out, double n);
  double (*sum_invpow_annulus)(const AtomBlock&, const double* c, double r_in, double r_out, double n);
  double (*sum_radial_profile)(const AtomBlock&, const double* c, const RadialProfile&);
  double (*sum_hilbert)(const AtomBlock&, double x, double eps);
  void (*sum_cauchy)(const AtomBlock&, const double* c, double eps, double* re, double* im);
  void (*euclid_distances)(const AtomBlock&, const double* c, double* out);
};

enum class Backend { scalar, avx2 };

bool avx2_supported();
Backend active_backend();
// Throws std::runtime_error when the requested backend is unavailable.
void set_backend(Backend b);
std::string backend_name(Backend b);

const Kernels& active();
const Kernels& scalar_kernels();
const Kernels& avx2_kernels();  // valid only when avx2_supported()

// Shared by both implementations; also handy for oracles in tests.
inline double pow_from_sq(double dist_sq, double n) {
  if (n == 1.0) return __builtin_sqrt(dist_sq);
  if (n == 2.0) return dist_sq;
  return __builtin_pow(dist_sq, 0.5 * n);
}

double radial_profile_value(double dist, const RadialProfile& p);

}  // namespace ndcz::simd
