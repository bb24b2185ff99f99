#pragma once

#include "ndcz/czo.hpp"
#include "ndcz/kernels.hpp"

namespace ndcz {

// A positive weight on supp(mu), together with the exponent it is tested at.
struct Weight {
  Weight(const DiscreteMeasure& m, std::vector<double> values, double p);

  const DiscreteMeasure* measure;
  std::vector<double> values;
  double p;

  double conjugate() const { return p / (p - 1.0); }
  // w(S) for S a cube: sum of w_i m_i over atoms in S
  double cube_total(const Cube& q) const;
};

Weight dual_weight(const Weight& w);  // sigma = w^{-1/(p-1)} at exponent p'

// Piecewise-constant weights on the factorial-interval measures; component
// ids identify the intervals. w0 is integrable, w_bad is not.
Weight w0_weight(const DiscreteMeasure& m, double p);    // (k-2)! on I_k, 1 on I_1
Weight wbad_weight(const DiscreteMeasure& m, double p);  // k! k^2 on I_k

struct SawyerWitness {
  int k = 0;
  Cube cube;
  double ratio = 0.0;
};

struct SawyerReport {
  double strong_const = 0.0;  // sup of int |S_k(sigma chi_Q)|^p  w  dmu / sigma(Q)
  double dual_const = 0.0;    // sup of int |S_k(w chi_Q)|^p' sigma dmu / w(Q)
  SawyerWitness strong_witness, dual_witness;
  int cubes_tested = 0;
  int k_lo = 0, k_hi = 0;
};

// Deduplicated lattice cubes plus atom-centered random cubes with
// log-uniform sides.
std::vector<Cube> default_cube_family(const Lattice& lat, int n_random, Rng& rng);

SawyerReport sawyer_constants(const KernelProfile& p, const Weight& w,
                              const std::vector<Cube>& family, int k_lo, int k_hi);

struct ZInftyReport {
  bool any_admissible = false;
  double tau_hat = std::numeric_limits<double>::infinity();
  int pairs_tested = 0;
  int admissible = 0;
  Cube witness_cube;
};

// Randomized search for the worst w(A cap 2Q)/w(Q) among pairs satisfying the
// kernel hypothesis S_{k+3} chi_A >= 1/4 on Q away from stopping atoms (which
// A must absorb). Estimation only; never a certificate.
ZInftyReport z_infty_estimate(const KernelProfile& p, const Weight& w, int trials, Rng& rng);

struct RhReport {
  std::vector<int> k_list;
  std::vector<double> log_partial_sums;  // natural logs of S(K)
  bool log_space_needed = false;         // some term exceeded ~1e300
  double last_over_first() const;
};

// Partial sums of w^{1+eps} dmu over the first K components, accumulated in
// log space so factorial weights cannot overflow.
RhReport reverse_holder_probe(const DiscreteMeasure& m, const std::vector<double>& w_values,
                              double eps, const std::vector<int>& k_list);

// Lower bound on the operator norm over L^p(w) from a stock of trial
// functions: lattice-cube indicators, random signs, and sigma chi_Q.
// op_tag: "Sk:<k>" | "N" | "Teps:<kernel>:<eps>" | "Tstar:<kernel>".
double weighted_norm_estimate(const std::string& op_tag, const KernelProfile& p,
                              const Weight& w, int trials, Rng& rng);

}  // namespace ndcz
