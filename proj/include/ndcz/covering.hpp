#pragma once

#include <memory>
#include <vector>

#include "ndcz/geometry.hpp"
#include "ndcz/rng.hpp"

namespace ndcz {

// Membership + boundary-distance oracle for an open set.
class Region {
 public:
  virtual ~Region() = default;
  virtual bool contains(const Point& x) const = 0;
  virtual double dist_to_complement(const Point& x) const = 0;  // 0 outside
  virtual bool may_intersect(const Cube& q) const { (void)q; return true; }
};

class BoxInterior : public Region {
 public:
  explicit BoxInterior(Cube box) : box_(box) {}
  bool contains(const Point& x) const override;
  double dist_to_complement(const Point& x) const override;
  bool may_intersect(const Cube& q) const override { return box_.intersects(q); }

 private:
  Cube box_;
};

// x[axis] strictly below the offset.
class HalfSpace : public Region {
 public:
  HalfSpace(int axis, double offset) : axis_(axis), offset_(offset) {}
  bool contains(const Point& x) const override { return x[axis_] < offset_; }
  double dist_to_complement(const Point& x) const override {
    return x[axis_] < offset_ ? offset_ - x[axis_] : 0.0;
  }

 private:
  int axis_;
  double offset_;
};

class BallComplement : public Region {
 public:
  BallComplement(Point c, double r) : c_(c), r_(r) {}
  bool contains(const Point& x) const override { return euclid_dist(x, c_) > r_; }
  double dist_to_complement(const Point& x) const override {
    const double d = euclid_dist(x, c_) - r_;
    return d > 0.0 ? d : 0.0;
  }

 private:
  Point c_;
  double r_;
};

struct WhitneyDecomposition {
  Cube root;
  std::vector<Cube> cubes;
  std::vector<char> at_floor;  // hit max_depth before satisfying the Whitney rule
};

// Dyadic refinement of root: keep a cube once 10 diam(Q) <= dist(center, bd).
WhitneyDecomposition whitney(const Region& omega, const Cube& root, int max_depth);

// Indices of the cubes forming U_m(Q_i): the neighbors of 3Q_i, then m-1
// further layers of touching cubes.
std::vector<std::size_t> neighbor_layers(const WhitneyDecomposition& w, std::size_t i, int m);

struct WhitneyCertificate {
  bool containment_ok = true;   // 10Q inside Omega for all non-floor cubes
  bool dist_window_ok = true;   // c1 l <= dist(Q, bd) <= c2 l, (c1, c2) = (1, 40 sqrt(d))
  bool interiors_disjoint = true;
  int cover_misses = 0;         // sampled interior points left uncovered
  int max_overlap_4q = 0;
  int samples = 0;
};

WhitneyCertificate check_whitney(const WhitneyDecomposition& w, const Region& omega,
                                 int samples, Rng& rng);

struct WienerSelection {
  std::vector<std::size_t> selected;
  bool covers = false;             // A inside the union of 20 Q_j
  bool dilates_disjoint = false;   // the 2Q_j are pairwise disjoint
  bool size_bound_ok = false;      // touching rejected cubes obey l(Q_k) <= 10 l(Q_j)
  double min_gap = 0.0;            // smallest separating axis gap between dilates
};

// Greedy largest-first selection with the 4Q-not-yet-covered rule; all three
// selection properties are re-verified exhaustively on the result.
WienerSelection wiener_select(const std::vector<Cube>& cubes, const std::vector<Point>& a);

struct BesicovitchSelection {
  std::vector<std::size_t> chosen;  // indices into the point set whose cube was kept
  std::vector<Cube> cover;
  int max_overlap = 0;
  bool covers = false;
  bool factor4_ok = false;  // z in A cap R_i implies l(Q_z) <= 4 l(R_i)
};

// Bounded-overlap selection from per-point cubes after the half-cube
// re-centering step that buys the factor-4 size control.
BesicovitchSelection besicovitch_select(const std::vector<Point>& a,
                                        const std::vector<Cube>& q_of);

}  // namespace ndcz
