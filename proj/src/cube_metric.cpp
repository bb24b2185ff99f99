#include "ndcz/cube_metric.hpp"

#include <cmath>
#include <stdexcept>

namespace ndcz {

Cube enclosing_cube(const Cube& q, const Cube& r) {
  if (q.is_whole_space() || r.is_whole_space()) return Cube::whole_space(q.dim());
  double h = q.half();
  for (int t = 0; t < q.dim(); ++t)
    h = std::max(h, std::abs(r.center()[t] - q.center()[t]) + r.half());
  return Cube(q.center(), 2.0 * h);
}

double delta(const DiscreteMeasure& m, const Cube& q, const Cube& r) {
  if (q.is_whole_space())
    return r.is_whole_space() ? 0.0 : throw std::invalid_argument("delta: Q must be inside R");
  if (!r.is_whole_space() && !r.contains(q))
    throw std::invalid_argument("delta: Q must be inside R");
  const Cube qr = enclosing_cube(q, r);
  const double h_out = qr.is_whole_space() ? std::numeric_limits<double>::infinity() : qr.half();
  return m.invpow_shell_sum(m.masses(), q.center(), q.half(), h_out);
}

double weighted_cube_mass(const DiscreteMeasure& m, const std::vector<double>& values,
                          const Cube& q) {
  std::vector<double> folded(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) folded[i] = values[i] * m.mass(i);
  return m.sum_in_cube(folded, q);
}

bool is_doubling(const DiscreteMeasure& m, const Cube& q, double alpha, double beta) {
  if (!(alpha > 1.0) || !(beta > 1.0))
    throw std::invalid_argument("is_doubling: alpha, beta > 1 required");
  const double inner = m.cube_mass(q);
  const double outer = m.cube_mass(q.scaled(alpha));
  if (inner == 0.0) return outer == 0.0;
  return outer <= beta * inner;
}

Cube find_big_doubling(const DiscreteMeasure& m, const Point& x, double c, double alpha,
                       double beta) {
  if (!(c > 0.0)) throw std::invalid_argument("find_big_doubling: c > 0 required");
  if (!(beta > std::pow(alpha, m.growth_exponent())))
    throw std::invalid_argument("find_big_doubling: beta > alpha^n required");
  const double cap = 10.0 * std::max(m.diameter(), c);
  for (double side = c;; side *= alpha) {
    if (side >= cap) return Cube(x, cap);
    Cube q(x, side);
    if (is_doubling(m, q, alpha, beta)) return q;
  }
}

MuSigmaDoubling find_mu_sigma_doubling(const DiscreteMeasure& m,
                                       const std::vector<double>& sigma, const Point& x,
                                       const Cube& q, const Cube& r, double beta) {
  if (!r.contains(q)) throw std::invalid_argument("find_mu_sigma_doubling: Q must be inside R");
  std::vector<double> folded(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) folded[i] = sigma[i] * m.mass(i);

  auto both_doubling = [&](const Cube& p) {
    const Cube big = p.scaled(100.0);
    const double mu_in = m.cube_mass(p), mu_out = m.cube_mass(big);
    const double sg_in = m.sum_in_cube(folded, p), sg_out = m.sum_in_cube(folded, big);
    const bool mu_ok = mu_in == 0.0 ? mu_out == 0.0 : mu_out <= beta * mu_in;
    const bool sg_ok = sg_in == 0.0 ? sg_out == 0.0 : sg_out <= beta * sg_in;
    return mu_ok && sg_ok;
  };

  MuSigmaDoubling out;
  Cube p = Cube(x, r.side());
  while (p.contains(q) && p.side() > 0.0) {
    ++out.steps_scanned;
    if (both_doubling(p)) {
      out.found = true;
      out.cube = p;
      return out;
    }
    p = Cube(x, p.side() / 100.0);
  }
  ++out.steps_scanned;  // Q itself is the last candidate
  if (both_doubling(q)) {
    out.found = true;
    out.cube = q;
  }
  return out;
}

DeltaPropertyReport check_delta_properties(const DiscreteMeasure& m, int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("check_delta_properties: trials >= 1 required");
  DeltaPropertyReport rep;
  rep.trials = trials;
  const double lo = std::max(m.resolution_floor(), 1e-9 * std::max(1.0, m.diameter()));
  const double hi = std::max(2.0 * m.max_cheb_extent(), lo * 4.0);
  const double c0 = m.growth_constant();
  const double n = m.growth_exponent();

  for (int trial = 0; trial < trials; ++trial) {
    const Point z = m.atom(uniform_index(rng, m.atom_count()));
    const double side_q = log_uniform(rng, lo, hi / 8.0);
    const Cube q(z, side_q);
    for (double rho : {2.0, 4.0, 8.0}) {
      const double d = delta(m, q, q.scaled(rho));
      const double norm = d / (c0 * std::pow(2.0, n) * std::pow(rho, n));
      if (norm > rep.max_dilation_normalized) {
        rep.max_dilation_normalized = norm;
        rep.dilation_witness = q;
      }
    }

    // concentric triple: the shell integrals telescope exactly
    const double side_p = log_uniform(rng, lo, side_q);
    const double side_r = log_uniform(rng, side_q, hi);
    const Cube p(z, side_p), r(z, side_r);
    const double defect =
        std::abs(delta(m, p, r) - (delta(m, p, q) + delta(m, q, r)));
    rep.max_concentric_defect = std::max(rep.max_concentric_defect, defect);
    rep.max_log_normalized =
        std::max(rep.max_log_normalized, delta(m, q, r) / (1.0 + std::log(side_r / side_q)));

    // shifted-center nested triple P c Q' c R for the general additivity bound
    Point zq = z;
    for (int t = 0; t < m.dim(); ++t) zq[t] += uniform(rng, -0.25, 0.25) * side_r / 2.0;
    const double side_q2 = uniform(rng, side_r / 4.0, side_r / 2.0);
    const Cube q2(zq, side_q2);
    Point zp = zq;
    for (int t = 0; t < m.dim(); ++t) zp[t] += uniform(rng, -0.25, 0.25) * side_q2 / 2.0;
    const Cube p2(zp, uniform(rng, side_q2 / 8.0, side_q2 / 2.0));
    if (r.contains(q2) && q2.contains(p2)) {
      const double d2 = std::abs(delta(m, p2, r) - (delta(m, p2, q2) + delta(m, q2, r)));
      rep.max_nested_defect = std::max(rep.max_nested_defect, d2);
    }
  }
  return rep;
}

}  // namespace ndcz
