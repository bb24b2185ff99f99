#pragma once

#include "ndcz/measure.hpp"

namespace ndcz {

// Smallest cube concentric with q containing q and r.
Cube enclosing_cube(const Cube& q, const Cube& r);

// delta(Q, R) = sum over atoms in Q_R \ Q of mass / |a - z_Q|^n. Requires
// Q subset of R (throws otherwise); R may be the whole space.
double delta(const DiscreteMeasure& m, const Cube& q, const Cube& r);

// sum of values_i * mass_i over atoms in q (weight-as-measure evaluation)
double weighted_cube_mass(const DiscreteMeasure& m, const std::vector<double>& values,
                          const Cube& q);

// mu(alpha Q) <= beta mu(Q); vacuous cubes are doubling iff their dilation
// is empty as well.
bool is_doubling(const DiscreteMeasure& m, const Cube& q, double alpha, double beta);

// Smallest cube in the ladder {c, alpha c, alpha^2 c, ...} centered at x that
// is (alpha, beta)-doubling. Requires beta > alpha^n. The ladder is capped at
// side 10 * diam(supp); the cap cube contains everything and is returned.
Cube find_big_doubling(const DiscreteMeasure& m, const Point& x, double c, double alpha,
                       double beta);

struct MuSigmaDoubling {
  bool found = false;
  Cube cube;
  int steps_scanned = 0;
};

// Scans P in {R, R/100, R/100^2, ...} down to Q and returns the first cube
// (100, beta)-doubling simultaneously for mu and for sigma dmu.
MuSigmaDoubling find_mu_sigma_doubling(const DiscreteMeasure& m,
                                       const std::vector<double>& sigma, const Point& x,
                                       const Cube& q, const Cube& r, double beta);

struct DeltaPropertyReport {
  // sup of delta(Q, rho Q) / (C0 2^n rho^n) over sampled cubes, rho in {2,4,8}
  double max_dilation_normalized = 0.0;
  // sup of delta(Q, R) / (1 + log(l_R / l_Q)) over sampled concentric pairs
  double max_log_normalized = 0.0;
  // additivity defect |delta(P,R) - delta(P,Q) - delta(Q,R)|
  double max_concentric_defect = 0.0;  // same-center triples: exact telescoping
  double max_nested_defect = 0.0;      // shifted-center nested triples
  Cube dilation_witness;
  int trials = 0;
  bool dilation_ok() const { return max_dilation_normalized <= 1.0 + 1e-12; }
};

DeltaPropertyReport check_delta_properties(const DiscreteMeasure& m, int trials, Rng& rng);

}  // namespace ndcz
