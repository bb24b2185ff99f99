#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>

namespace ndcz {

// Embedding dimension is small in this setting (the examples live in R^1 and
// R^2); a fixed capacity keeps points on the stack.
inline constexpr int kMaxDim = 4;

class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(check_dim(dim)) { c_.fill(0.0); }
  Point(std::initializer_list<double> xs) {
    if (xs.size() == 0 || xs.size() > static_cast<std::size_t>(kMaxDim))
      throw std::invalid_argument("Point: dimension out of range");
    dim_ = static_cast<int>(xs.size());
    int i = 0;
    for (double v : xs) c_[i++] = v;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  const double* data() const { return c_.data(); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

 private:
  static int check_dim(int d) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Point: dimension out of range");
    return d;
  }
  std::array<double, kMaxDim> c_{};
  int dim_ = 1;
};

inline double euclid_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double cheb_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

// Closed axis-parallel cube. side() == 0 encodes a point; a distinguished
// whole-space value stands in for R^d.
class Cube {
 public:
  Cube() = default;
  Cube(Point center, double side) : center_(center), side_(side) {
    if (!(side >= 0.0) || !std::isfinite(side))
      throw std::invalid_argument("Cube: side must be finite and >= 0");
  }

  static Cube whole_space(int dim) {
    Cube q;
    q.center_ = Point(dim);
    q.side_ = 0.0;
    q.whole_ = true;
    return q;
  }

  bool is_whole_space() const { return whole_; }
  bool is_point() const { return !whole_ && side_ == 0.0; }
  int dim() const { return center_.dim(); }
  const Point& center() const { return center_; }
  double side() const { return whole_ ? std::numeric_limits<double>::infinity() : side_; }
  double half() const { return side() / 2.0; }

  Cube scaled(double rho) const {
    if (whole_) return *this;
    return Cube(center_, rho * side_);
  }

  bool contains(const Point& x) const {
    if (whole_) return true;
    return cheb_dist(center_, x) <= side_ / 2.0;
  }

  bool contains(const Cube& q) const {
    if (whole_) return true;
    if (q.whole_) return false;
    // box-in-box: per-axis |dz| + h_q <= h
    return cheb_dist(center_, q.center_) + q.side_ / 2.0 <= side_ / 2.0;
  }

  bool intersects(const Cube& q) const {
    if (whole_ || q.whole_) return true;
    return cheb_dist(center_, q.center_) <= (side_ + q.side_) / 2.0;
  }

 private:
  Point center_;
  double side_ = 0.0;
  bool whole_ = false;
};

}  // namespace ndcz
