#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ndcz/cube_metric.hpp"
#include "ndcz/measure.hpp"

namespace ndcz {

enum class CubeClass : std::uint8_t { initial, transit, stopping };

struct ScaleClass {
  enum class Kind : std::uint8_t { at, above_all, below_all } kind = Kind::at;
  int k = 0;
};

struct LatticeOptions {
  double epsilon_tol_factor = 0.05;  // eps_tol = factor * A
  double a_min = 4.0;
  double scale_gap = 100.0;  // hard cap l_k <= l_{k-1}/scale_gap
};

// Per-support-point ladders k -> Q_{x,k}. Scale 0 is the initial cube (the
// smallest cube centered at x containing the whole support, standing in for
// the whole space); consecutive scales step the cube distance by ~A. A ladder
// stops, and its cubes collapse to points, once no admissible side can place
// the increment within eps_tol of A.
class Lattice {
 public:
  static Lattice build(const DiscreteMeasure& m, double a, int k_span,
                       const LatticeOptions& opts = {});

  const DiscreteMeasure& measure() const { return *m_; }
  double a_constant() const { return a_; }
  double epsilon_tol() const { return eps_tol_; }
  int k_max() const { return k_max_; }

  double side(std::size_t atom, int k) const;
  CubeClass classify(std::size_t atom, int k) const;
  Cube cube(std::size_t atom, int k) const;
  // first k whose cube degenerates to a point; k_max()+1 when the ladder ran
  // the full span without stopping
  int stopping_scale(std::size_t atom) const { return stop_[atom]; }
  // recorded delta(Q_{x,k}, Q_{x,k-1}), defined for 1 <= k < stopping_scale
  double increment(std::size_t atom, int k) const;
  // max |increment - A| over pairs where both scales are transit cubes
  double epsilon_observed() const { return eps_observed_; }

  ScaleClass ad_class(const Cube& q) const;

  // psi_k(x) = sup_z (l(Q_{z,k}) - |x - z|): the 1-Lipschitz side envelope
  std::vector<double> lipschitz_sides(int k) const;
  double lipschitz_side_at(int k, const Point& x) const;

  // diagnostics: returns a copy with sides multiplied by (1 + rel*u),
  // u ~ U[-1,1], for fault-injection tests
  Lattice with_perturbed_sides(double rel, std::uint64_t seed) const;

  std::string to_json() const;
  static Lattice from_json(const DiscreteMeasure& m, const std::string& text);

 private:
  Lattice() = default;
  void check_atom(std::size_t atom) const;
  void check_scale(int k) const;

  const DiscreteMeasure* m_ = nullptr;
  double a_ = 0.0;
  double eps_tol_ = 0.0;
  int k_max_ = 0;
  std::vector<std::vector<double>> sides_;       // per atom, k = 0 .. stop-1
  std::vector<std::vector<double>> increments_;  // per atom, index k-1 for k >= 1
  std::vector<int> stop_;
  double eps_observed_ = 0.0;
};

}  // namespace ndcz
