#include "ndcz/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ndcz {

bool BoxInterior::contains(const Point& x) const {
  for (int t = 0; t < box_.dim(); ++t)
    if (std::abs(x[t] - box_.center()[t]) >= box_.half()) return false;
  return true;
}

double BoxInterior::dist_to_complement(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int t = 0; t < box_.dim(); ++t)
    d = std::min(d, box_.half() - std::abs(x[t] - box_.center()[t]));
  return d > 0.0 ? d : 0.0;
}

namespace {

double cube_diam(const Cube& q) { return q.side() * std::sqrt(double(q.dim())); }

void refine(const Region& omega, const Cube& q, int depth, int max_depth,
            WhitneyDecomposition& out) {
  if (!omega.may_intersect(q)) return;
  const double dist = omega.dist_to_complement(q.center());
  if (10.0 * cube_diam(q) <= dist) {
    out.cubes.push_back(q);
    out.at_floor.push_back(0);
    return;
  }
  if (depth >= max_depth) {
    if (omega.contains(q.center())) {
      out.cubes.push_back(q);
      out.at_floor.push_back(1);
    }
    return;
  }
  const int d = q.dim();
  const double child_side = q.side() / 2.0;
  const int children = 1 << d;
  for (int c = 0; c < children; ++c) {
    Point z = q.center();
    for (int t = 0; t < d; ++t) z[t] += ((c >> t) & 1 ? 1.0 : -1.0) * child_side / 2.0;
    refine(omega, Cube(z, child_side), depth + 1, max_depth, out);
  }
}

}  // namespace

WhitneyDecomposition whitney(const Region& omega, const Cube& root, int max_depth) {
  if (root.is_whole_space()) throw std::invalid_argument("whitney: bounded root required");
  WhitneyDecomposition out;
  out.root = root;
  refine(omega, root, 0, max_depth, out);
  return out;
}

std::vector<std::size_t> neighbor_layers(const WhitneyDecomposition& w, std::size_t i, int m) {
  if (m < 1) throw std::invalid_argument("neighbor_layers: m >= 1 required");
  if (i >= w.cubes.size()) throw std::out_of_range("neighbor_layers: cube index");
  std::vector<char> in(w.cubes.size(), 0);
  // first layer: everything touching 3Q_i
  const Cube seed = w.cubes[i].scaled(3.0);
  for (std::size_t j = 0; j < w.cubes.size(); ++j)
    if (seed.intersects(w.cubes[j])) in[j] = 1;
  in[i] = 1;
  for (int layer = 1; layer < m; ++layer) {
    std::vector<char> next = in;
    for (std::size_t j = 0; j < w.cubes.size(); ++j) {
      if (!in[j]) continue;
      for (std::size_t k = 0; k < w.cubes.size(); ++k)
        if (!next[k] && w.cubes[j].intersects(w.cubes[k])) next[k] = 1;
    }
    in.swap(next);
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < w.cubes.size(); ++j)
    if (in[j]) out.push_back(j);
  return out;
}

WhitneyCertificate check_whitney(const WhitneyDecomposition& w, const Region& omega,
                                 int samples, Rng& rng) {
  WhitneyCertificate cert;
  cert.samples = samples;
  const int d = w.root.dim();
  const double c2 = 40.0 * std::sqrt(double(d));

  for (std::size_t i = 0; i < w.cubes.size(); ++i) {
    if (w.at_floor[i]) continue;
    const Cube& q = w.cubes[i];
    const double dist_center = omega.dist_to_complement(q.center());
    // corners of 10Q must stay inside Omega
    const Cube big = q.scaled(10.0);
    for (int c = 0; c < (1 << d); ++c) {
      Point z = big.center();
      for (int t = 0; t < d; ++t) z[t] += ((c >> t) & 1 ? 1.0 : -1.0) * big.half();
      if (!omega.contains(z)) cert.containment_ok = false;
    }
    const double lo = dist_center - cube_diam(q) / 2.0;  // <= dist(Q, bd)
    if (lo < q.side() * (1.0 - 1e-12)) cert.dist_window_ok = false;
    // the upper window needs a rejected parent; the root has none
    if (q.side() < w.root.side() && dist_center > c2 * q.side()) cert.dist_window_ok = false;
  }

  for (std::size_t i = 0; i < w.cubes.size() && cert.interiors_disjoint; ++i)
    for (std::size_t j = i + 1; j < w.cubes.size(); ++j) {
      const double gap = cheb_dist(w.cubes[i].center(), w.cubes[j].center()) -
                         (w.cubes[i].half() + w.cubes[j].half());
      if (gap < -1e-12 * std::max(w.cubes[i].side(), w.cubes[j].side())) {
        cert.interiors_disjoint = false;
        break;
      }
    }

  // interior points well inside Omega must be covered; points closer to the
  // boundary than the refinement floor may legitimately be missed
  double floor_side = w.root.side();
  for (std::size_t i = 0; i < w.cubes.size(); ++i) floor_side = std::min(floor_side, w.cubes[i].side());
  const double safe_dist = 25.0 * floor_side * std::sqrt(double(d));
  for (int s = 0; s < samples; ++s) {
    Point z = w.root.center();
    for (int t = 0; t < d; ++t) z[t] += uniform(rng, -0.5, 0.5) * w.root.side();
    if (omega.dist_to_complement(z) < safe_dist) continue;
    bool covered = false;
    int overlap4 = 0;
    for (std::size_t i = 0; i < w.cubes.size(); ++i) {
      if (w.cubes[i].contains(z)) covered = true;
      if (w.cubes[i].scaled(4.0).contains(z)) ++overlap4;
    }
    if (!covered) ++cert.cover_misses;
    cert.max_overlap_4q = std::max(cert.max_overlap_4q, overlap4);
  }
  return cert;
}

namespace {

// Exact test for target inside the union of axis-aligned boxes, by
// coordinate compression over the boxes clipped to the target.
bool box_covered(const Cube& target, const std::vector<Cube>& boxes) {
  const int d = target.dim();
  for (const Cube& b : boxes)
    if (b.contains(target)) return true;
  std::vector<double> cuts[kMaxDim];
  for (int t = 0; t < d; ++t) {
    cuts[t].push_back(target.center()[t] - target.half());
    cuts[t].push_back(target.center()[t] + target.half());
  }
  std::vector<const Cube*> relevant;
  for (const Cube& b : boxes) {
    if (!b.intersects(target)) continue;
    relevant.push_back(&b);
    for (int t = 0; t < d; ++t) {
      const double lo = b.center()[t] - b.half();
      const double hi = b.center()[t] + b.half();
      if (lo > target.center()[t] - target.half() && lo < target.center()[t] + target.half())
        cuts[t].push_back(lo);
      if (hi > target.center()[t] - target.half() && hi < target.center()[t] + target.half())
        cuts[t].push_back(hi);
    }
  }
  if (relevant.empty()) return false;
  for (int t = 0; t < d; ++t) {
    std::sort(cuts[t].begin(), cuts[t].end());
    cuts[t].erase(std::unique(cuts[t].begin(), cuts[t].end()), cuts[t].end());
  }
  // check the center of every elementary cell
  std::size_t counts[kMaxDim], idx[kMaxDim];
  for (int t = 0; t < d; ++t) {
    counts[t] = cuts[t].size() - 1;
    idx[t] = 0;
  }
  while (true) {
    Point z(d);
    for (int t = 0; t < d; ++t) z[t] = 0.5 * (cuts[t][idx[t]] + cuts[t][idx[t] + 1]);
    bool inside = false;
    for (const Cube* b : relevant)
      if (b->contains(z)) {
        inside = true;
        break;
      }
    if (!inside) return false;
    int t = d - 1;
    while (t >= 0 && idx[t] + 1 >= counts[t]) {
      idx[t] = 0;
      --t;
    }
    if (t < 0) break;
    ++idx[t];
  }
  return true;
}

}  // namespace

WienerSelection wiener_select(const std::vector<Cube>& cubes, const std::vector<Point>& a) {
  if (cubes.empty()) throw std::invalid_argument("wiener_select: empty cube family");
  for (const Point& x : a) {
    bool inside = false;
    for (const Cube& q : cubes)
      if (q.contains(x)) {
        inside = true;
        break;
      }
    if (!inside) throw std::invalid_argument("wiener_select: A not covered by the input family");
  }

  WienerSelection out;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    if (cubes[i].is_whole_space()) {
      out.selected = {i};
      out.covers = true;
      out.dilates_disjoint = true;
      out.size_bound_ok = true;
      return out;
    }

  std::vector<char> taken(cubes.size(), 0);
  std::vector<Cube> dilated20;
  while (true) {
    std::size_t best = cubes.size();
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      if (taken[i]) continue;
      if (best != cubes.size() && cubes[i].side() <= cubes[best].side()) continue;
      if (box_covered(cubes[i].scaled(4.0), dilated20)) continue;
      best = i;
    }
    if (best == cubes.size()) break;
    taken[best] = 1;
    out.selected.push_back(best);
    dilated20.push_back(cubes[best].scaled(20.0));
  }

  out.covers = true;
  for (const Point& x : a) {
    bool inside = false;
    for (const Cube& q : dilated20)
      if (q.contains(x)) {
        inside = true;
        break;
      }
    if (!inside) out.covers = false;
  }

  out.dilates_disjoint = true;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u < out.selected.size(); ++u)
    for (std::size_t v = u + 1; v < out.selected.size(); ++v) {
      const Cube qu = cubes[out.selected[u]].scaled(2.0);
      const Cube qv = cubes[out.selected[v]].scaled(2.0);
      double gap = -std::numeric_limits<double>::infinity();
      for (int t = 0; t < qu.dim(); ++t)
        gap = std::max(gap, std::abs(qu.center()[t] - qv.center()[t]) - (qu.half() + qv.half()));
      out.min_gap = std::min(out.min_gap, gap);
      if (!(gap > 0.0)) out.dilates_disjoint = false;
    }

  out.size_bound_ok = true;
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    if (taken[k]) continue;
    for (std::size_t j : out.selected)
      if (cubes[k].scaled(2.0).intersects(cubes[j].scaled(2.0)) &&
          cubes[k].side() > 10.0 * cubes[j].side())
        out.size_bound_ok = false;
  }
  return out;
}

BesicovitchSelection besicovitch_select(const std::vector<Point>& a,
                                        const std::vector<Cube>& q_of) {
  if (a.size() != q_of.size())
    throw std::invalid_argument("besicovitch_select: one cube per point required");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (cheb_dist(q_of[i].center(), a[i]) > 1e-12 * std::max(1.0, q_of[i].side()))
      throw std::invalid_argument("besicovitch_select: Q_of(x) must be centered at x");

  const std::size_t n = a.size();
  // re-centering: R_x is a largest cube of the family whose half concentric
  // shrink contains x
  std::vector<std::size_t> r_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = i;
    for (std::size_t j = 0; j < n; ++j)
      if (q_of[j].scaled(0.5).contains(a[i]) && q_of[j].side() > q_of[best].side()) best = j;
    r_of[i] = best;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
    return q_of[r_of[u]].side() > q_of[r_of[v]].side();
  });

  BesicovitchSelection out;
  std::vector<char> covered(n, 0);
  for (std::size_t i : order) {
    if (covered[i]) continue;
    const Cube& r = q_of[r_of[i]];
    out.chosen.push_back(i);
    out.cover.push_back(r);
    for (std::size_t j = 0; j < n; ++j)
      if (!covered[j] && r.contains(a[j])) covered[j] = 1;
  }

  out.covers = std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
  out.factor4_ok = true;
  for (std::size_t ci = 0; ci < out.cover.size(); ++ci)
    for (std::size_t z = 0; z < n; ++z)
      if (out.cover[ci].contains(a[z]) && q_of[z].side() > 4.0 * out.cover[ci].side())
        out.factor4_ok = false;
  for (std::size_t z = 0; z < n; ++z) {
    int overlap = 0;
    for (const Cube& c : out.cover)
      if (c.contains(a[z])) ++overlap;
    out.max_overlap = std::max(out.max_overlap, overlap);
  }
  return out;
}

}  // namespace ndcz
