#include "ndcz/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ndcz {

namespace {

constexpr double kGridRatio = 1.189207115002721;  // 2^(1/4)

// Per-point scan data: distances in increasing order with prefix sums of the
// plain values and of values / dist^n (coincident atoms enter only the plain
// prefix).
struct RadialPrefix {
  std::vector<double> dist;
  std::vector<double> cum_w;
  std::vector<double> cum_m;
  std::vector<double> cum_ipw;
  std::vector<double> cum_ipm;

  std::size_t rank(double r) const {
    return std::upper_bound(dist.begin(), dist.end(), r) - dist.begin();
  }
};

RadialPrefix build_prefix(const DiscreteMeasure& m, const std::vector<double>& w,
                          const Point& x) {
  const std::size_t n = m.atom_count();
  std::vector<double> eu;
  m.distances_to(x, eu);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return eu[a] < eu[b]; });

  RadialPrefix rp;
  rp.dist.resize(n);
  rp.cum_w.resize(n + 1, 0.0);
  rp.cum_m.resize(n + 1, 0.0);
  rp.cum_ipw.resize(n + 1, 0.0);
  rp.cum_ipm.resize(n + 1, 0.0);
  const double ge = m.growth_exponent();
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t a = order[j];
    const double d = eu[a];
    rp.dist[j] = d;
    const double ip = d > 0.0 ? 1.0 / simd::pow_from_sq(d * d, ge) : 0.0;
    rp.cum_w[j + 1] = rp.cum_w[j] + w[a];
    rp.cum_m[j + 1] = rp.cum_m[j] + m.mass(a);
    rp.cum_ipw[j + 1] = rp.cum_ipw[j] + w[a] * ip;
    rp.cum_ipm[j + 1] = rp.cum_ipm[j] + m.mass(a) * ip;
  }
  return rp;
}

}  // namespace

std::vector<double> radii_grid(const DiscreteMeasure& m) {
  double lo = m.resolution_floor();
  if (lo <= 0.0) lo = std::max(1e-9, 1e-9 * m.diameter());
  const double hi = std::max(4.0 * m.diameter(), lo * 4.0);
  std::vector<double> grid;
  for (double r = lo; r <= hi * (1.0 + 1e-12); r *= kGridRatio) grid.push_back(r);
  return grid;
}

std::vector<std::vector<double>> n_phi_batch(const DiscreteMeasure& m,
                                             const std::vector<GridFunction>& fs,
                                             const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("n_phi: need at least two grid radii");
  const std::size_t n = m.atom_count();
  const std::size_t g = grid.size();
  const double ge = m.growth_exponent();
  std::vector<std::vector<double>> out(fs.size(), std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> weights;
  for (const auto& f : fs) weights.push_back(f.abs_times_mass());

  std::vector<double> rn(g);
  for (std::size_t i = 0; i < g; ++i) rn[i] = std::pow(grid[i], ge);

  std::vector<double> wg(g), ipw(g), mg(g), ipm(g);
  for (std::size_t x = 0; x < n; ++x) {
    const Point px = m.atom(x);
    for (std::size_t fi = 0; fi < fs.size(); ++fi) {
      const RadialPrefix rp = build_prefix(m, weights[fi], px);
      for (std::size_t i = 0; i < g; ++i) {
        const std::size_t rk = rp.rank(grid[i]);
        wg[i] = rp.cum_w[rk];
        ipw[i] = rp.cum_ipw[rk];
        mg[i] = rp.cum_m[rk];
        ipm[i] = rp.cum_ipm[rk];
      }
      double best = 0.0;
      for (std::size_t i = 0; i + 1 < g; ++i) {
        const double ball_w = wg[i] / rn[i];
        const double ball_m = mg[i] / rn[i];
        for (std::size_t j = i + 1; j < g; ++j) {
          const double num = ball_w + (ipw[j] - ipw[i]);
          const double den = 1.0 + ball_m + (ipm[j] - ipm[i]);
          best = std::max(best, num / den);
        }
      }
      out[fi][x] = best;
    }
  }
  return out;
}

std::vector<double> n_phi(const DiscreteMeasure& m, const GridFunction& f,
                          const std::vector<double>& grid) {
  return n_phi_batch(m, {f}, grid).front();
}

std::vector<double> n_sup(const KernelProfile& p, const GridFunction& f) {
  std::vector<double> absf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);
  const int k_hi = p.lattice().k_max();
  std::vector<double> out(f.size(), 0.0);
  for (int k = 0; k <= k_hi; ++k) {
    const auto sk = p.apply_values(k, absf);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], sk[i]);
  }
  return out;
}

std::vector<double> n_trunc(const KernelProfile& p, const GridFunction& f, int h) {
  std::vector<double> absf(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) absf[i] = std::abs(f[i]);
  const int k_hi = p.lattice().k_max();
  const int k_lo = std::clamp(h, 0, k_hi);
  std::vector<double> out(f.size(), 0.0);
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto sk = p.apply_values(k, absf);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], sk[i]);
  }
  return out;
}

std::vector<double> m_lambda(const DiscreteMeasure& m, const GridFunction& f, double lambda,
                             const std::vector<double>& grid) {
  if (lambda < 1.0) throw std::invalid_argument("m_lambda: lambda >= 1 required");
  const std::vector<double> w = f.abs_times_mass();
  std::vector<double> out(m.atom_count(), 0.0);
  for (std::size_t x = 0; x < m.atom_count(); ++x) {
    const RadialPrefix rp = build_prefix(m, w, m.atom(x));
    double best = 0.0;
    for (double r : grid) {
      const double num = rp.cum_w[rp.rank(r)];
      const double den = rp.cum_m[rp.rank(lambda * r)];
      if (den > 0.0) best = std::max(best, num / den);
    }
    out[x] = best;
  }
  return out;
}

std::vector<double> m_radial(const DiscreteMeasure& m, const GridFunction& f,
                             const std::vector<double>& grid) {
  const std::vector<double> w = f.abs_times_mass();
  const std::size_t n = m.atom_count();
  const std::size_t g = grid.size();
  const double ge = m.growth_exponent();
  std::vector<double> out(n, 0.0);
  std::vector<double> suffix(g);
  std::vector<double> eu;
  for (std::size_t c = 0; c < n; ++c) {
    const Point pc = m.atom(c);
    const RadialPrefix rp = build_prefix(m, w, pc);
    for (std::size_t i = 0; i < g; ++i)
      suffix[i] = rp.cum_w[rp.rank(grid[i])] / std::pow(grid[i], ge);
    for (std::size_t i = g - 1; i-- > 0;) suffix[i] = std::max(suffix[i], suffix[i + 1]);
    m.distances_to(pc, eu);
    for (std::size_t x = 0; x < n; ++x) {
      // smallest grid ball around c that still contains x
      const std::size_t gi =
          std::lower_bound(grid.begin(), grid.end(), eu[x]) - grid.begin();
      if (gi < g) out[x] = std::max(out[x], suffix[gi]);
    }
  }
  return out;
}

SmallMeanResult find_small_mean_doubling(const KernelProfile& p, std::size_t atom, int k,
                                         const GridFunction& f, double beta, double c6) {
  const Lattice& lat = p.lattice();
  const DiscreteMeasure& m = p.measure();
  if (lat.classify(atom, k) != CubeClass::transit)
    throw std::invalid_argument("find_small_mean_doubling: (x,k) must be a transit cube");

  SmallMeanResult res;
  simd::RadialProfile prof;
  p.profile(atom, k, &prof);
  const Point x = m.atom(atom);
  res.target = c6 * m.radial_profile_sum(f.abs_times_mass(), x, prof);

  const std::vector<double> w = f.abs_times_mass();
  const double lo = 0.75 * lat.side(atom, k);
  const double hi = 1.2 * lat.side(atom, k - 1);
  for (double side = lo; side <= hi; side *= 1.15) {
    const Cube q(x, side);
    const auto cls = lat.ad_class(q);
    if (cls.kind != ScaleClass::Kind::at || (cls.k != k && cls.k != k - 1)) continue;
    ++res.cubes_scanned;
    if (!is_doubling(m, q, 2.0, beta)) continue;
    const Cube q2 = q.scaled(2.0);
    const double mu2 = m.cube_mass(q2);
    if (mu2 == 0.0) continue;
    const double mean = m.sum_in_cube(w, q2) / mu2;
    const double ratio = res.target > 0.0
                             ? mean / res.target
                             : (mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    res.best_ratio = std::min(res.best_ratio, ratio);
    if (mean <= res.target) {
      res.found = true;
      res.cube = q;
      res.mean = mean;
      return res;
    }
  }
  return res;
}

}  // namespace ndcz
