#include "ndcz/simd.hpp"

#include <cmath>

#if !defined(__AVX2__) && !defined(NDCZ_NO_AVX2_TU)
#define NDCZ_NO_AVX2_TU
#endif

#ifndef NDCZ_NO_AVX2_TU
#include <immintrin.h>

namespace ndcz::simd {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

// ||a_i - c||_2^2 for 4 atoms starting at i.
inline __m256d dist_sq4(const AtomBlock& b, const double* c, std::size_t i) {
  __m256d s = _mm256_setzero_pd();
  for (int t = 0; t < b.dim; ++t) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(b.coord[t] + i), _mm256_set1_pd(c[t]));
    s = _mm256_fmadd_pd(d, d, s);
  }
  return s;
}

inline __m256d cheb4(const AtomBlock& b, const double* c, std::size_t i) {
  __m256d s = _mm256_setzero_pd();
  for (int t = 0; t < b.dim; ++t) {
    const __m256d d = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(b.coord[t] + i), _mm256_set1_pd(c[t])));
    s = _mm256_max_pd(s, d);
  }
  return s;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// dist^n from dist^2, vector form. General exponents fall back to per-lane
// std::pow; n == 1 and n == 2 stay fully vectorized.
inline __m256d pow_from_sq4(__m256d d2, double n) {
  if (n == 1.0) return _mm256_sqrt_pd(d2);
  if (n == 2.0) return d2;
  alignas(32) double tmp[kLanes];
  _mm256_store_pd(tmp, d2);
  for (std::size_t l = 0; l < kLanes; ++l) tmp[l] = std::pow(tmp[l], 0.5 * n);
  return _mm256_load_pd(tmp);
}

double sum_in_ball(const AtomBlock& b, const double* c, double r) {
  const __m256d r2 = _mm256_set1_pd(r * r);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d mask = _mm256_cmp_pd(dist_sq4(b, c, i), r2, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(b.weight + i)));
  }
  double tail = hsum(acc);
  const double rr = r * r;
  for (; i < b.count; ++i) {
    double s = 0.0;
    for (int t = 0; t < b.dim; ++t) {
      const double d = b.coord[t][i] - c[t];
      s += d * d;
    }
    if (s <= rr) tail += b.weight[i];
  }
  return tail;
}

double sum_in_cube(const AtomBlock& b, const double* c, double h) {
  const __m256d hv = _mm256_set1_pd(h);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d mask = _mm256_cmp_pd(cheb4(b, c, i), hv, _CMP_LE_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(b.weight + i)));
  }
  double tail = hsum(acc);
  for (; i < b.count; ++i) {
    double s = 0.0;
    for (int t = 0; t < b.dim; ++t) s = std::max(s, std::abs(b.coord[t][i] - c[t]));
    if (s <= h) tail += b.weight[i];
  }
  return tail;
}

double sum_invpow_shell(const AtomBlock& b, const double* c, double h_in, double h_out, double n) {
  const __m256d lo = _mm256_set1_pd(h_in), hi = _mm256_set1_pd(h_out);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d ch = cheb4(b, c, i);
    const __m256d mask = _mm256_and_pd(_mm256_cmp_pd(ch, lo, _CMP_GT_OQ),
                                       _mm256_cmp_pd(ch, hi, _CMP_LE_OQ));
    if (_mm256_movemask_pd(mask) == 0) continue;
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(b.weight + i), pow_from_sq4(dist_sq4(b, c, i), n));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, q));
  }
  double tail = hsum(acc);
  for (; i < b.count; ++i) {
    double ch = 0.0, d2 = 0.0;
    for (int t = 0; t < b.dim; ++t) {
      const double d = b.coord[t][i] - c[t];
      ch = std::max(ch, std::abs(d));
      d2 += d * d;
    }
    if (ch > h_in && ch <= h_out) tail += b.weight[i] / pow_from_sq(d2, n);
  }
  return tail;
}

double sum_invpow_annulus(const AtomBlock& b, const double* c, double r_in, double r_out, double n) {
  const __m256d lo2 = _mm256_set1_pd(r_in * r_in), hi2 = _mm256_set1_pd(r_out * r_out);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d d2 = dist_sq4(b, c, i);
    const __m256d mask = _mm256_and_pd(_mm256_cmp_pd(d2, lo2, _CMP_GT_OQ),
                                       _mm256_cmp_pd(d2, hi2, _CMP_LE_OQ));
    if (_mm256_movemask_pd(mask) == 0) continue;
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(b.weight + i), pow_from_sq4(d2, n));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, q));
  }
  double tail = hsum(acc);
  for (; i < b.count; ++i) {
    double d2 = 0.0;
    for (int t = 0; t < b.dim; ++t) {
      const double d = b.coord[t][i] - c[t];
      d2 += d * d;
    }
    if (d2 > r_in * r_in && d2 <= r_out * r_out) tail += b.weight[i] / pow_from_sq(d2, n);
  }
  return tail;
}

double sum_radial_profile(const AtomBlock& b, const double* c, const RadialProfile& p) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d r_core = _mm256_set1_pd(p.r_core);
  const __m256d r_out = _mm256_set1_pd(p.r_out);
  const __m256d r_supp = _mm256_set1_pd(p.r_supp);
  const __m256d inv_a = _mm256_set1_pd(p.inv_a);
  const __m256d inv_width =
      _mm256_set1_pd(std::isinf(p.r_out) ? 0.0 : 1.0 / (p.r_supp - p.r_out));
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d dist = _mm256_sqrt_pd(dist_sq4(b, c, i));
    const __m256d inside = _mm256_cmp_pd(dist, r_supp, _CMP_LE_OQ);
    if (_mm256_movemask_pd(inside) == 0) continue;
    const __m256d t = _mm256_max_pd(dist, r_core);
    const __m256d tn = pow_from_sq4(_mm256_mul_pd(t, t), p.n);
    __m256d val = _mm256_div_pd(inv_a, tn);
    // taper: u = (r_supp - dist)/(r_supp - r_out), cut = u^2 (3 - 2u)
    const __m256d u = _mm256_mul_pd(_mm256_sub_pd(r_supp, dist), inv_width);
    const __m256d cut =
        _mm256_mul_pd(_mm256_mul_pd(u, u),
                      _mm256_sub_pd(_mm256_set1_pd(3.0), _mm256_add_pd(u, u)));
    const __m256d in_taper = _mm256_cmp_pd(dist, r_out, _CMP_GT_OQ);
    val = _mm256_mul_pd(val, _mm256_blendv_pd(one, cut, in_taper));
    val = _mm256_and_pd(val, inside);
    val = _mm256_and_pd(val, _mm256_cmp_pd(t, _mm256_setzero_pd(), _CMP_GT_OQ));
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(b.weight + i), val, acc);
  }
  double tail = hsum(acc);
  for (; i < b.count; ++i) {
    double d2 = 0.0;
    for (int t = 0; t < b.dim; ++t) {
      const double d = b.coord[t][i] - c[t];
      d2 += d * d;
    }
    tail += b.weight[i] * radial_profile_value(std::sqrt(d2), p);
  }
  return tail;
}

double sum_hilbert(const AtomBlock& b, double x, double eps) {
  const __m256d xv = _mm256_set1_pd(x), ev = _mm256_set1_pd(eps);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d d = _mm256_sub_pd(xv, _mm256_loadu_pd(b.coord[0] + i));
    const __m256d mask = _mm256_cmp_pd(abs_pd(d), ev, _CMP_GT_OQ);
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(b.weight + i), d);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, q));
  }
  double tail = hsum(acc);
  for (; i < b.count; ++i) {
    const double d = x - b.coord[0][i];
    if (std::abs(d) > eps) tail += b.weight[i] / d;
  }
  return tail;
}

void sum_cauchy(const AtomBlock& b, const double* c, double eps, double* re, double* im) {
  const __m256d e2 = _mm256_set1_pd(eps * eps);
  const __m256d cx = _mm256_set1_pd(c[0]), cy = _mm256_set1_pd(c[1]);
  __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(cx, _mm256_loadu_pd(b.coord[0] + i));
    const __m256d dy = _mm256_sub_pd(cy, _mm256_loadu_pd(b.coord[1] + i));
    const __m256d d2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d mask = _mm256_cmp_pd(d2, e2, _CMP_GT_OQ);
    if (_mm256_movemask_pd(mask) == 0) continue;
    const __m256d w = _mm256_div_pd(_mm256_loadu_pd(b.weight + i), d2);
    ar = _mm256_add_pd(ar, _mm256_and_pd(mask, _mm256_mul_pd(w, dx)));
    ai = _mm256_sub_pd(ai, _mm256_and_pd(mask, _mm256_mul_pd(w, dy)));
  }
  double sr = hsum(ar), si = hsum(ai);
  for (; i < b.count; ++i) {
    const double dx = c[0] - b.coord[0][i];
    const double dy = c[1] - b.coord[1][i];
    const double d2 = dx * dx + dy * dy;
    if (d2 > eps * eps) {
      sr += b.weight[i] * dx / d2;
      si -= b.weight[i] * dy / d2;
    }
  }
  *re = sr;
  *im = si;
}

void euclid_distances(const AtomBlock& b, const double* c, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= b.count; i += kLanes)
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(dist_sq4(b, c, i)));
  for (; i < b.count; ++i) {
    double d2 = 0.0;
    for (int t = 0; t < b.dim; ++t) {
      const double d = b.coord[t][i] - c[t];
      d2 += d * d;
    }
    out[i] = std::sqrt(d2);
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k = {
      &sum_in_ball,       &sum_in_cube,        &sum_invpow_shell,
      &sum_invpow_annulus, &sum_radial_profile, &sum_hilbert,
      &sum_cauchy,        &euclid_distances,
  };
  return k;
}

}  // namespace ndcz::simd

#else  // NDCZ_NO_AVX2_TU

namespace ndcz::simd {
const Kernels& avx2_kernels() { return scalar_kernels(); }
}  // namespace ndcz::simd

#endif
