#include "ndcz/czo.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ndcz {

KernelSpec hilbert_kernel() {
  KernelSpec k;
  k.name = "hilbert";
  k.dim = 1;
  k.n = 1.0;
  k.c1 = 1.0;
  k.c2 = 4.0;
  k.gamma = 1.0;
  k.eval = [](const Point& x, const Point& y) { return 1.0 / (x[0] - y[0]); };
  return k;
}

KernelSpec cauchy_re_kernel() {
  KernelSpec k;
  k.name = "cauchy_re";
  k.dim = 2;
  k.n = 1.0;
  k.c1 = 1.0;
  k.c2 = 4.0;
  k.gamma = 1.0;
  k.eval = [](const Point& x, const Point& y) {
    const double dx = x[0] - y[0], dy = x[1] - y[1];
    return dx / (dx * dx + dy * dy);
  };
  return k;
}

KernelSpec cauchy_im_kernel() {
  KernelSpec k;
  k.name = "cauchy_im";
  k.dim = 2;
  k.n = 1.0;
  k.c1 = 1.0;
  k.c2 = 4.0;
  k.gamma = 1.0;
  k.eval = [](const Point& x, const Point& y) {
    const double dx = x[0] - y[0], dy = x[1] - y[1];
    return -dy / (dx * dx + dy * dy);
  };
  return k;
}

KernelSpec fractional_kernel(double n) {
  KernelSpec k;
  k.name = "frac_I1";
  k.dim = 0;
  k.n = n;
  k.c1 = 1.0;
  k.c2 = n == 1.0 ? 4.0 : n * std::pow(2.0, n + 2.0);
  k.gamma = 1.0;
  k.eval = [n](const Point& x, const Point& y) {
    const double d = euclid_dist(x, y);
    return 1.0 / simd::pow_from_sq(d * d, n);
  };
  return k;
}

namespace {
std::map<std::string, KernelSpec>& registry() {
  static std::map<std::string, KernelSpec> reg;
  return reg;
}
}  // namespace

void register_kernel(const KernelSpec& spec) { registry()[spec.name] = spec; }

KernelSpec lookup_kernel(const std::string& name, const DiscreteMeasure& m) {
  if (name == "hilbert") return hilbert_kernel();
  if (name == "cauchy_re") return cauchy_re_kernel();
  if (name == "cauchy_im") return cauchy_im_kernel();
  if (name == "frac_I1") return fractional_kernel(m.growth_exponent());
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown kernel '" + name + "'");
  return it->second;
}

std::vector<double> apply_t_eps(const DiscreteMeasure& m, const KernelSpec& k,
                                const GridFunction& f, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("apply_t_eps: eps > 0 required");
  if (k.dim != 0 && k.dim != m.dim())
    throw std::invalid_argument("apply_t_eps: kernel dimension mismatch");
  const std::size_t count = m.atom_count();
  const std::vector<double> v = f.times_mass();
  std::vector<double> out(count, 0.0);

  if (k.name == "hilbert" && m.dim() == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = m.hilbert_sum(v, m.atom(i)[0], eps);
    return out;
  }
  if ((k.name == "cauchy_re" || k.name == "cauchy_im") && m.dim() == 2) {
    const bool want_re = k.name == "cauchy_re";
    for (std::size_t i = 0; i < count; ++i) {
      const auto [re, im] = m.cauchy_sum(v, m.atom(i), eps);
      out[i] = want_re ? re : im;
    }
    return out;
  }
  if (k.name == "frac_I1" && k.n == m.growth_exponent()) {
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i)
      out[i] = m.invpow_annulus_sum(v, m.atom(i), eps, inf);
    return out;
  }

  for (std::size_t i = 0; i < count; ++i) {
    const Point x = m.atom(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (v[j] == 0.0) continue;
      const Point y = m.atom(j);
      if (euclid_dist(x, y) > eps) acc += k.eval(x, y) * v[j];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> apply_t_star(const DiscreteMeasure& m, const KernelSpec& k,
                                 const GridFunction& f, const std::vector<double>& eps_grid) {
  std::vector<double> out(m.atom_count(), 0.0);
  for (double eps : eps_grid) {
    const auto te = apply_t_eps(m, k, f, eps);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(te[i]));
  }
  return out;
}

std::vector<double> default_eps_grid(const DiscreteMeasure& m) {
  const double lo = std::max(m.min_spacing() * 0.5, 1e-12 * std::max(1.0, m.diameter()));
  const double hi = std::max(m.diameter(), lo * 2.0);
  std::vector<double> grid;
  const double ratio = std::pow(hi / lo, 1.0 / 11.0);
  double r = lo;
  for (int i = 0; i < 12; ++i, r *= ratio) grid.push_back(r);
  return grid;
}

CzReport check_cz_conditions(const KernelSpec& k, int trials, Rng& rng, double domain_scale) {
  if (trials < 1) throw std::invalid_argument("check_cz_conditions: trials >= 1 required");
  const int d = k.dim == 0 ? 1 : k.dim;
  CzReport rep;
  rep.trials = trials;
  auto random_point = [&] {
    Point p(d);
    for (int t = 0; t < d; ++t) p[t] = uniform(rng, 0.0, domain_scale);
    return p;
  };
  auto random_dir = [&] {
    Point u(d);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (int t = 0; t < d; ++t) {
        u[t] = uniform(rng, -1.0, 1.0);
        norm += u[t] * u[t];
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (int t = 0; t < d; ++t) u[t] /= norm;
    return u;
  };

  rep.size_witness_x = random_point();
  rep.size_witness_y = rep.size_witness_x;
  for (int trial = 0; trial < trials; ++trial) {
    const Point x = random_point();
    const Point dir = random_dir();
    const double dist = log_uniform(rng, 1e-4 * domain_scale, domain_scale);
    Point y = x;
    for (int t = 0; t < d; ++t) y[t] += dist * dir[t];
    const double dn = simd::pow_from_sq(dist * dist, k.n);

    const double size_ratio = std::abs(k.eval(x, y)) * dn / k.c1;
    if (size_ratio > rep.max_size_ratio) {
      rep.max_size_ratio = size_ratio;
      rep.size_witness_x = x;
      rep.size_witness_y = y;
    }

    const Point dir2 = random_dir();
    const double step = uniform(rng, 0.0, 0.5) * dist;
    if (step <= 0.0) continue;
    Point xp = x;
    for (int t = 0; t < d; ++t) xp[t] += step * dir2[t];
    const double diff = std::abs(k.eval(x, y) - k.eval(xp, y)) +
                        std::abs(k.eval(y, x) - k.eval(y, xp));
    const double bound = k.c2 * std::pow(step, k.gamma) /
                         (dn * std::pow(dist, k.gamma));
    if (bound > 0.0) rep.max_smooth_ratio = std::max(rep.max_smooth_ratio, diff / bound);
  }
  return rep;
}

double l2_norm_estimate(const DiscreteMeasure& m, const KernelSpec& k, double eps, int iters,
                        Rng& rng) {
  const std::size_t count = m.atom_count();
  std::vector<double> g(count);
  for (auto& v : g) v = uniform(rng, -1.0, 1.0);

  auto mu_norm = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i] * v[i] * m.mass(i);
    return std::sqrt(s);
  };
  auto apply_adjoint = [&](const std::vector<double>& v) {
    std::vector<double> out(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
      const Point y = m.atom(j);
      double acc = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        const Point x = m.atom(i);
        if (euclid_dist(x, y) > eps) acc += k.eval(x, y) * v[i] * m.mass(i);
      }
      out[j] = acc;
    }
    return out;
  };

  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    const double norm = mu_norm(g);
    if (norm == 0.0) return 0.0;
    for (auto& v : g) v /= norm;
    const auto tg = apply_t_eps(m, k, GridFunction(m, g), eps);
    estimate = mu_norm(tg);
    g = apply_adjoint(tg);
  }
  return estimate;
}

}  // namespace ndcz
