#include "ndcz/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ndcz/maximal.hpp"

namespace ndcz {

Weight::Weight(const DiscreteMeasure& m, std::vector<double> vals, double exponent)
    : measure(&m), values(std::move(vals)), p(exponent) {
  if (values.size() != m.atom_count())
    throw std::invalid_argument("weight: length must match atom count");
  if (!(p > 1.0)) throw std::invalid_argument("weight: p > 1 required");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("weight: values must be positive and finite");
}

double Weight::cube_total(const Cube& q) const {
  return weighted_cube_mass(*measure, values, q);
}

Weight dual_weight(const Weight& w) {
  std::vector<double> sigma(w.values.size());
  const double e = -1.0 / (w.p - 1.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = std::pow(w.values[i], e);
  return Weight(*w.measure, std::move(sigma), w.conjugate());
}

namespace {

std::vector<double> component_weight(const DiscreteMeasure& m,
                                     const std::function<double(int)>& per_component) {
  std::vector<double> v(m.atom_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int k = m.component(i);
    if (k < 1) throw std::invalid_argument("interval weight: measure has no component labels");
    v[i] = per_component(k);
  }
  return v;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

Weight w0_weight(const DiscreteMeasure& m, double p) {
  return Weight(m, component_weight(m, [](int k) { return k >= 2 ? factorial(k - 2) : 1.0; }),
                p);
}

Weight wbad_weight(const DiscreteMeasure& m, double p) {
  return Weight(
      m, component_weight(m, [](int k) { return factorial(k) * double(k) * double(k); }), p);
}

std::vector<Cube> default_cube_family(const Lattice& lat, int n_random, Rng& rng) {
  const DiscreteMeasure& m = lat.measure();
  std::vector<Cube> family;
  std::map<std::pair<double, double>, bool> seen;  // (first coord of center, side)
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    for (int k = 0; k <= lat.k_max(); ++k) {
      const double s = lat.side(i, k);
      const auto key = std::make_pair(m.atom(i)[0], s);
      if (seen.emplace(key, true).second) family.emplace_back(m.atom(i), s);
      if (s == 0.0) break;
    }
  }
  const double lo = std::max(m.resolution_floor(), 1e-9 * std::max(1.0, m.diameter()));
  const double hi = std::max(2.0 * m.max_cheb_extent(), lo * 4.0);
  for (int r = 0; r < n_random; ++r) {
    const Point c = m.atom(uniform_index(rng, m.atom_count()));
    family.emplace_back(c, log_uniform(rng, lo, hi));
  }
  return family;
}

namespace {

// S_k applied to (values restricted to the atoms of `inside`); picks the
// cheaper of the support-driven scalar loop and the full vectorized sweep.
std::vector<double> masked_apply(const KernelProfile& p, int k,
                                 const std::vector<double>& values,
                                 const std::vector<std::size_t>& inside) {
  const DiscreteMeasure& m = p.measure();
  const std::size_t n = m.atom_count();
  if (inside.size() * 4 >= n) {
    std::vector<double> masked(n, 0.0);
    for (std::size_t i : inside) masked[i] = values[i];
    return p.apply_values(k, masked);
  }
  std::vector<double> out(n, 0.0);
  simd::RadialProfile prof;
  for (std::size_t x = 0; x < n; ++x) {
    if (!p.profile(x, k, &prof)) continue;
    const Point px = m.atom(x);
    double acc = 0.0;
    for (std::size_t y : inside)
      acc += values[y] * m.mass(y) * simd::radial_profile_value(euclid_dist(px, m.atom(y)), prof);
    out[x] = acc;
  }
  return out;
}

double lp_integral(const DiscreteMeasure& m, const std::vector<double>& g, double p,
                   const std::vector<double>& density) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += std::pow(std::abs(g[i]), p) * density[i] * m.mass(i);
  return s;
}

}  // namespace

SawyerReport sawyer_constants(const KernelProfile& p, const Weight& w,
                              const std::vector<Cube>& family, int k_lo, int k_hi) {
  if (family.empty()) throw std::invalid_argument("sawyer_constants: empty cube family");
  const DiscreteMeasure& m = p.measure();
  if (w.measure != &m) throw std::invalid_argument("sawyer_constants: measure mismatch");
  const Weight sigma = dual_weight(w);
  const double pp = w.p, pc = w.conjugate();

  SawyerReport rep;
  rep.k_lo = k_lo;
  rep.k_hi = k_hi;
  for (const Cube& q : family) {
    const auto inside = m.atoms_in_cube(q);
    if (inside.empty()) continue;
    double w_q = 0.0, sigma_q = 0.0;
    for (std::size_t i : inside) {
      w_q += w.values[i] * m.mass(i);
      sigma_q += sigma.values[i] * m.mass(i);
    }
    if (w_q <= 0.0 || sigma_q <= 0.0) continue;
    ++rep.cubes_tested;
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto s_sigma = masked_apply(p, k, sigma.values, inside);
      const double strong = lp_integral(m, s_sigma, pp, w.values) / sigma_q;
      if (strong > rep.strong_const) {
        rep.strong_const = strong;
        rep.strong_witness = {k, q, strong};
      }
      const auto s_w = masked_apply(p, k, w.values, inside);
      const double dual = lp_integral(m, s_w, pc, sigma.values) / w_q;
      if (dual > rep.dual_const) {
        rep.dual_const = dual;
        rep.dual_witness = {k, q, dual};
      }
    }
  }
  return rep;
}

ZInftyReport z_infty_estimate(const KernelProfile& p, const Weight& w, int trials, Rng& rng) {
  const DiscreteMeasure& m = p.measure();
  const Lattice& lat = p.lattice();
  ZInftyReport rep;
  const double lo = std::max(m.resolution_floor(), 1e-9 * std::max(1.0, m.diameter()));
  const double hi = std::max(2.0 * m.max_cheb_extent(), lo * 4.0);

  for (int trial = 0; trial < trials; ++trial) {
    const Point c = m.atom(uniform_index(rng, m.atom_count()));
    const Cube q(c, log_uniform(rng, lo, hi));
    const auto cls = lat.ad_class(q);
    if (cls.kind != ScaleClass::Kind::at || cls.k + 3 > lat.k_max()) continue;
    const int ks = cls.k + 3;

    const auto q_atoms = m.atoms_in_cube(q);
    if (q_atoms.empty()) continue;

    // candidate set A, always absorbing the stopping atoms of Q
    std::vector<char> in_a(m.atom_count(), 0);
    const int mode = trial % 4;
    if (mode == 0) {
      std::fill(in_a.begin(), in_a.end(), 1);
    } else if (mode == 1) {
      const double keep = uniform(rng, 0.3, 0.9);
      for (std::size_t i = 0; i < in_a.size(); ++i) in_a[i] = uniform(rng, 0.0, 1.0) < keep;
    } else if (mode == 2) {
      // union of random sub-cubes of 2Q
      const Cube q2 = q.scaled(2.0);
      for (int s = 0; s < 4; ++s) {
        Point z = q2.center();
        for (int t = 0; t < m.dim(); ++t) z[t] += uniform(rng, -0.5, 0.5) * q2.side();
        for (std::size_t i : m.atoms_in_cube(Cube(z, q2.side() * uniform(rng, 0.1, 0.5))))
          in_a[i] = 1;
      }
    } else {
      std::fill(in_a.begin(), in_a.end(), 1);
      const double drop = uniform(rng, 0.02, 0.2);
      for (std::size_t i = 0; i < in_a.size(); ++i)
        if (uniform(rng, 0.0, 1.0) < drop) in_a[i] = 0;
    }
    for (std::size_t i : q_atoms)
      if (lat.classify(i, ks) == CubeClass::stopping) in_a[i] = 1;

    std::vector<double> chi(m.atom_count(), 0.0);
    std::vector<std::size_t> a_list;
    for (std::size_t i = 0; i < in_a.size(); ++i)
      if (in_a[i]) {
        chi[i] = 1.0;
        a_list.push_back(i);
      }
    if (a_list.empty()) continue;
    ++rep.pairs_tested;

    const auto s_chi = masked_apply(p, ks, chi, a_list);
    bool hypothesis = true;
    for (std::size_t i : q_atoms) {
      if (lat.classify(i, ks) == CubeClass::stopping) continue;
      if (s_chi[i] < 0.25) {
        hypothesis = false;
        break;
      }
    }
    if (!hypothesis) continue;

    const Cube q2 = q.scaled(2.0);
    double w_q = 0.0;
    for (std::size_t i : q_atoms) w_q += w.values[i] * m.mass(i);
    if (w_q <= 0.0) continue;
    double w_a2q = 0.0;
    for (std::size_t i : m.atoms_in_cube(q2))
      if (in_a[i]) w_a2q += w.values[i] * m.mass(i);

    ++rep.admissible;
    const double ratio = w_a2q / w_q;
    if (ratio < rep.tau_hat) {
      rep.tau_hat = ratio;
      rep.witness_cube = q;
    }
  }
  rep.any_admissible = rep.admissible > 0;
  return rep;
}

namespace {
double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}
}  // namespace

RhReport reverse_holder_probe(const DiscreteMeasure& m, const std::vector<double>& w_values,
                              double eps, const std::vector<int>& k_list) {
  if (w_values.size() != m.atom_count())
    throw std::invalid_argument("reverse_holder_probe: weight length mismatch");
  if (!(eps >= 0.0)) throw std::invalid_argument("reverse_holder_probe: eps >= 0 required");
  RhReport rep;
  rep.k_list = k_list;

  int max_k = 0;
  for (std::size_t i = 0; i < m.atom_count(); ++i) max_k = std::max(max_k, m.component(i));
  std::vector<double> log_term_by_comp(max_k + 1, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m.atom_count(); ++i) {
    const double lt = (1.0 + eps) * std::log(w_values[i]) + std::log(m.mass(i));
    if (lt > std::log(1e300)) rep.log_space_needed = true;
    const int c = m.component(i);
    log_term_by_comp[c] = log_sum_exp(log_term_by_comp[c], lt);
  }

  for (int k : k_list) {
    if (k < 1 || k > max_k)
      throw std::invalid_argument("reverse_holder_probe: K outside component range");
    double acc = -std::numeric_limits<double>::infinity();
    for (int c = 1; c <= k; ++c) acc = log_sum_exp(acc, log_term_by_comp[c]);
    rep.log_partial_sums.push_back(acc);
  }
  return rep;
}

double RhReport::last_over_first() const {
  if (log_partial_sums.size() < 2) return 1.0;
  return std::exp(log_partial_sums.back() - log_partial_sums.front());
}

double weighted_norm_estimate(const std::string& op_tag, const KernelProfile& p,
                              const Weight& w, int trials, Rng& rng) {
  const DiscreteMeasure& m = p.measure();
  const Lattice& lat = p.lattice();
  const Weight sigma = dual_weight(w);

  auto lp_norm = [&](const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      s += std::pow(std::abs(g[i]), w.p) * w.values[i] * m.mass(i);
    return std::pow(s, 1.0 / w.p);
  };

  std::vector<std::string> parts;
  {
    std::stringstream ss(op_tag);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
  }
  auto apply_op = [&](const GridFunction& f) -> std::vector<double> {
    if (parts[0] == "Sk") return p.apply(parts.size() > 1 ? std::stoi(parts[1]) : 1, f);
    if (parts[0] == "N") return n_sup(p, f);
    if (parts[0] == "Teps")
      return apply_t_eps(m, lookup_kernel(parts.at(1), m), f, std::stod(parts.at(2)));
    if (parts[0] == "Tstar")
      return apply_t_star(m, lookup_kernel(parts.at(1), m), f, default_eps_grid(m));
    throw std::invalid_argument("weighted_norm_estimate: unknown op tag '" + op_tag + "'");
  };

  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> v(m.atom_count());
    const int mode = trial % 3;
    if (mode == 0) {
      const std::size_t a = uniform_index(rng, m.atom_count());
      const int k = static_cast<int>(uniform_index(rng, lat.stopping_scale(a)));
      const Cube q = lat.cube(a, k);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = q.contains(m.atom(i)) ? 1.0 : 0.0;
    } else if (mode == 1) {
      for (auto& x : v) x = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    } else {
      const std::size_t a = uniform_index(rng, m.atom_count());
      const int k = static_cast<int>(uniform_index(rng, lat.stopping_scale(a)));
      const Cube q = lat.cube(a, k);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = q.contains(m.atom(i)) ? sigma.values[i] : 0.0;
    }
    GridFunction f(m, v);
    const double fn = lp_norm(f.values());
    if (fn <= 0.0) continue;
    best = std::max(best, lp_norm(apply_op(f)) / fn);
  }
  return best;
}

}  // namespace ndcz
