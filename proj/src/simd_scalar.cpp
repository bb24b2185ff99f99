#include "ndcz/simd.hpp"

#include <cmath>

namespace ndcz::simd {

double radial_profile_value(double dist, const RadialProfile& p) {
  if (dist > p.r_supp) return 0.0;
  double cut = 1.0;
  if (dist > p.r_out) {
    const double u = (p.r_supp - dist) / (p.r_supp - p.r_out);
    cut = u * u * (3.0 - 2.0 * u);
  }
  const double t = dist > p.r_core ? dist : p.r_core;
  if (t == 0.0) return 0.0;  // point ladder with no resolution floor
  return cut * p.inv_a / pow_from_sq(t * t, p.n);
}

namespace {

inline double dist_sq_to(const AtomBlock& b, const double* c, std::size_t i) {
  double s = 0.0;
  for (int t = 0; t < b.dim; ++t) {
    const double d = b.coord[t][i] - c[t];
    s += d * d;
  }
  return s;
}

inline double cheb_to(const AtomBlock& b, const double* c, std::size_t i) {
  double s = 0.0;
  for (int t = 0; t < b.dim; ++t) {
    const double d = std::abs(b.coord[t][i] - c[t]);
    if (d > s) s = d;
  }
  return s;
}

double sum_in_ball(const AtomBlock& b, const double* c, double r) {
  const double r2 = r * r;
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i)
    if (dist_sq_to(b, c, i) <= r2) acc += b.weight[i];
  return acc;
}

double sum_in_cube(const AtomBlock& b, const double* c, double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i)
    if (cheb_to(b, c, i) <= h) acc += b.weight[i];
  return acc;
}

double sum_invpow_shell(const AtomBlock& b, const double* c, double h_in, double h_out, double n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i) {
    const double ch = cheb_to(b, c, i);
    if (ch > h_in && ch <= h_out) acc += b.weight[i] / pow_from_sq(dist_sq_to(b, c, i), n);
  }
  return acc;
}

double sum_invpow_annulus(const AtomBlock& b, const double* c, double r_in, double r_out, double n) {
  const double lo2 = r_in * r_in, hi2 = r_out * r_out;
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i) {
    const double d2 = dist_sq_to(b, c, i);
    if (d2 > lo2 && d2 <= hi2) acc += b.weight[i] / pow_from_sq(d2, n);
  }
  return acc;
}

double sum_radial_profile(const AtomBlock& b, const double* c, const RadialProfile& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i)
    acc += b.weight[i] * radial_profile_value(std::sqrt(dist_sq_to(b, c, i)), p);
  return acc;
}

double sum_hilbert(const AtomBlock& b, double x, double eps) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.count; ++i) {
    const double d = x - b.coord[0][i];
    if (std::abs(d) > eps) acc += b.weight[i] / d;
  }
  return acc;
}

void sum_cauchy(const AtomBlock& b, const double* c, double eps, double* re, double* im) {
  const double e2 = eps * eps;
  double sr = 0.0, si = 0.0;
  for (std::size_t i = 0; i < b.count; ++i) {
    const double dx = c[0] - b.coord[0][i];
    const double dy = c[1] - b.coord[1][i];
    const double d2 = dx * dx + dy * dy;
    if (d2 > e2) {
      sr += b.weight[i] * dx / d2;
      si -= b.weight[i] * dy / d2;
    }
  }
  *re = sr;
  *im = si;
}

void euclid_distances(const AtomBlock& b, const double* c, double* out) {
  for (std::size_t i = 0; i < b.count; ++i) out[i] = std::sqrt(dist_sq_to(b, c, i));
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {
      &sum_in_ball,       &sum_in_cube,        &sum_invpow_shell,
      &sum_invpow_annulus, &sum_radial_profile, &sum_hilbert,
      &sum_cauchy,        &euclid_distances,
  };
  return k;
}

}  // namespace ndcz::simd
