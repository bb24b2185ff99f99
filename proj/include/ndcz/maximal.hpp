#pragma once

#include "ndcz/kernels.hpp"

namespace ndcz {

// Log radius grid with ratio 2^(1/4), clipped to [resolution floor, 4 * diam].
// Stands in for the continuous sup over radii.
std::vector<double> radii_grid(const DiscreteMeasure& m);

// N via the three-case bump phi_{x,r,R}: max over grid pairs r < R of the
// normalized averages.
std::vector<double> n_phi(const DiscreteMeasure& m, const GridFunction& f,
                          const std::vector<double>& grid);
std::vector<std::vector<double>> n_phi_batch(const DiscreteMeasure& m,
                                             const std::vector<GridFunction>& fs,
                                             const std::vector<double>& grid);

// N as sup_k S_k |f|, and its truncation to scales k >= h.
std::vector<double> n_sup(const KernelProfile& p, const GridFunction& f);
std::vector<double> n_trunc(const KernelProfile& p, const GridFunction& f, int h);

// Centered lambda-dilated maximal averages.
std::vector<double> m_lambda(const DiscreteMeasure& m, const GridFunction& f, double lambda,
                             const std::vector<double>& grid);

// Non-centered radial maximal function over atom-centered balls.
std::vector<double> m_radial(const DiscreteMeasure& m, const GridFunction& f,
                             const std::vector<double>& grid);

struct SmallMeanResult {
  bool found = false;
  Cube cube;
  double mean = 0.0;
  double target = 0.0;
  double best_ratio = std::numeric_limits<double>::infinity();
  int cubes_scanned = 0;
};

// Scans cubes centered at the atom through AD_{k,k-1} for a (2,beta)-doubling
// cube whose 2Q-average of |f| is at most c6 * S_k|f|(x).
SmallMeanResult find_small_mean_doubling(const KernelProfile& p, std::size_t atom, int k,
                                         const GridFunction& f, double beta, double c6);

}  // namespace ndcz
