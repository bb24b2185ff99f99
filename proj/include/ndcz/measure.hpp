#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ndcz/geometry.hpp"
#include "ndcz/rng.hpp"
#include "ndcz/simd.hpp"

namespace ndcz {

struct GrowthReport {
  bool passed = false;
  double max_ratio = 0.0;  // sup of ball_mass / r^n over the sampled grid
  Point worst_x;
  double worst_r = 0.0;
  double tol = 0.0;
  int points_sampled = 0;
  int radii_sampled = 0;
};

// Atomic approximation of a Borel measure with n-dimensional growth
// mu(B(x,r)) <= C0 r^n. Immutable after construction; queries are pure.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int dim, double growth_exponent, double growth_constant,
                  std::vector<Point> points, std::vector<double> masses,
                  std::vector<int> components = {});

  int dim() const { return dim_; }
  double growth_exponent() const { return n_; }
  double growth_constant() const { return c0_; }
  std::size_t atom_count() const { return masses_.size(); }
  Point atom(std::size_t i) const;
  double mass(std::size_t i) const { return masses_[i]; }
  int component(std::size_t i) const { return components_[i]; }
  const std::vector<double>& masses() const { return masses_; }
  double total_mass() const { return total_mass_; }

  // Geometry of the support.
  double diameter() const { return diameter_; }          // bounding-box diagonal
  double max_cheb_extent() const { return max_extent_; }
  double resolution_floor() const { return resolution_floor_; }  // 2 * max NN distance
  double median_spacing() const { return median_nn_; }
  double min_spacing() const { return min_nn_; }
  double nn_distance(std::size_t i) const { return nn_[i]; }  // 0 for a lone atom
  Cube support_cube(const Point& center) const;  // smallest centered cube containing supp

  // Mass queries (closed ball / closed cube, Euclidean / sup norm).
  double ball_mass(const Point& x, double r) const;
  double cube_mass(const Cube& q) const;
  std::vector<std::size_t> atoms_in_cube(const Cube& q) const;

  // Weighted accumulations; `values` is aligned with atom order and is used
  // verbatim (callers premultiply by masses where the operator wants f dmu).
  double sum_in_ball(const std::vector<double>& values, const Point& x, double r) const;
  double sum_in_cube(const std::vector<double>& values, const Cube& q) const;
  // sum of values_i / |a_i - c|^n over atoms with h_in < cheb(a_i, c) <= h_out
  double invpow_shell_sum(const std::vector<double>& values, const Point& c,
                          double h_in, double h_out) const;
  // same with Euclidean annulus membership r_in < |a_i - c| <= r_out
  double invpow_annulus_sum(const std::vector<double>& values, const Point& c,
                            double r_in, double r_out) const;
  double radial_profile_sum(const std::vector<double>& values, const Point& c,
                            const simd::RadialProfile& p) const;
  double hilbert_sum(const std::vector<double>& values, double x, double eps) const;
  std::pair<double, double> cauchy_sum(const std::vector<double>& values, const Point& c,
                                       double eps) const;
  void distances_to(const Point& x, std::vector<double>& out) const;

  GrowthReport verify_growth(int samples, double tol, Rng& rng,
                             double r_lo = -1.0, double r_hi = -1.0) const;

  std::string to_json() const;
  static DiscreteMeasure from_json(const std::string& text);

 private:
  struct Grid {
    Point lo;
    int cells[kMaxDim] = {1, 1, 1, 1};
    double size[kMaxDim] = {1.0, 1.0, 1.0, 1.0};
    std::vector<std::uint32_t> cell_start;  // CSR over reordered atoms
  };

  simd::AtomBlock block(std::size_t begin, std::size_t end, const double* weights) const;
  void for_each_range(const Point& lo, const Point& hi,
                      const std::function<void(std::size_t, std::size_t)>& fn) const;
  void build_grid();
  void compute_spacing_stats();

  int dim_;
  double n_;
  double c0_;
  std::vector<double> coords_[kMaxDim];  // structure of arrays, canonical order
  std::vector<double> masses_;
  std::vector<int> components_;
  double total_mass_ = 0.0;
  Point bbox_lo_, bbox_hi_;
  double diameter_ = 0.0;
  double max_extent_ = 0.0;
  double resolution_floor_ = 0.0;
  double median_nn_ = 0.0;
  double min_nn_ = 0.0;
  std::vector<double> nn_;
  Grid grid_;
};

// Real values attached to the atoms of a measure.
class GridFunction {
 public:
  GridFunction(const DiscreteMeasure& m, std::vector<double> values);
  static GridFunction constant(const DiscreteMeasure& m, double value);
  static GridFunction indicator(const DiscreteMeasure& m, const Cube& q);

  const DiscreteMeasure& measure() const { return *m_; }
  const std::vector<double>& values() const { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::size_t size() const { return v_.size(); }

  std::vector<double> abs_times_mass() const;  // |f_i| * m_i
  std::vector<double> times_mass() const;      // f_i * m_i

 private:
  const DiscreteMeasure* m_;
  std::vector<double> v_;
};

// Canned generators for the worked examples.
DiscreteMeasure lebesgue_interval(int res);
DiscreteMeasure lebesgue_square(int res);
DiscreteMeasure saksman_intervals(int k_count, int res_per_interval);
DiscreteMeasure ad_regular_line(int res);
DiscreteMeasure from_atoms(int dim, double growth_exponent, double growth_constant,
                           const std::vector<std::pair<Point, double>>& atoms,
                           std::vector<int> components = {});
// Parses generator specs of the form "lebesgue_interval:res=4096",
// "saksman:K=6,res=200", "square:res=64", "line:res=500".
DiscreteMeasure generate_from_spec(const std::string& spec);

}  // namespace ndcz
