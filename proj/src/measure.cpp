#include "ndcz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ndcz {

namespace {

double kahan_total(const std::vector<double>& xs) {
  double sum = 0.0, carry = 0.0;
  for (double x : xs) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dim, double growth_exponent, double growth_constant,
                                 std::vector<Point> points, std::vector<double> masses,
                                 std::vector<int> components)
    : dim_(dim), n_(growth_exponent), c0_(growth_constant), masses_(std::move(masses)) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("measure: dimension out of range");
  if (!(n_ > 0.0) || n_ > dim_) throw std::invalid_argument("measure: need 0 < n <= d");
  if (!(c0_ > 0.0)) throw std::invalid_argument("measure: growth constant must be positive");
  if (points.empty()) throw std::invalid_argument("measure: needs at least one atom");
  if (points.size() != masses_.size())
    throw std::invalid_argument("measure: points/masses size mismatch");
  for (const Point& p : points)
    if (p.dim() != dim_) throw std::invalid_argument("measure: point dimension mismatch");
  for (double m : masses_)
    if (!(m > 0.0) || !std::isfinite(m))
      throw std::invalid_argument("measure: masses must be positive and finite");
  if (components.empty()) components.assign(points.size(), 0);
  if (components.size() != points.size())
    throw std::invalid_argument("measure: component list size mismatch");
  components_ = std::move(components);

  for (int t = 0; t < dim_; ++t) {
    coords_[t].resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) coords_[t][i] = points[i][t];
    for (double v : coords_[t])
      if (!std::isfinite(v)) throw std::invalid_argument("measure: coordinates must be finite");
  }

  total_mass_ = kahan_total(masses_);
  if (total_mass_ >= 1e15)
    throw std::invalid_argument("measure: total mass too large for double accumulation");

  bbox_lo_ = Point(dim_);
  bbox_hi_ = Point(dim_);
  double diag2 = 0.0;
  max_extent_ = 0.0;
  for (int t = 0; t < dim_; ++t) {
    const auto [lo, hi] = std::minmax_element(coords_[t].begin(), coords_[t].end());
    bbox_lo_[t] = *lo;
    bbox_hi_[t] = *hi;
    const double e = *hi - *lo;
    diag2 += e * e;
    max_extent_ = std::max(max_extent_, e);
  }
  diameter_ = std::sqrt(diag2);

  build_grid();
  compute_spacing_stats();
  build_grid();  // re-binned with the measured spacing
}

void DiscreteMeasure::build_grid() {
  const std::size_t n = masses_.size();
  const double cap = std::clamp(std::ceil(std::pow(4.0 * double(n), 1.0 / dim_)), 1.0, 2048.0);
  for (int t = 0; t < dim_; ++t) {
    const double extent = bbox_hi_[t] - bbox_lo_[t];
    int cells = 1;
    if (extent > 0.0) {
      const double target = median_nn_ > 0.0 ? median_nn_ : extent / cap;
      cells = static_cast<int>(std::clamp(std::floor(extent / target) + 1.0, 1.0, cap));
    }
    grid_.cells[t] = cells;
    grid_.size[t] = extent > 0.0 ? extent / cells : 1.0;
  }
  grid_.lo = bbox_lo_;

  std::size_t total_cells = 1;
  for (int t = 0; t < dim_; ++t) total_cells *= grid_.cells[t];

  auto cell_of = [&](std::size_t i) {
    std::size_t id = 0;
    for (int t = 0; t < dim_; ++t) {
      int c = static_cast<int>((coords_[t][i] - grid_.lo[t]) / grid_.size[t]);
      c = std::clamp(c, 0, grid_.cells[t] - 1);
      id = id * grid_.cells[t] + c;
    }
    return id;
  };

  std::vector<std::size_t> cell_id(n);
  for (std::size_t i = 0; i < n; ++i) cell_id[i] = cell_of(i);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return cell_id[a] < cell_id[b]; });

  auto permute = [&](auto& v) {
    auto copy = v;
    for (std::size_t i = 0; i < n; ++i) v[i] = copy[order[i]];
  };
  for (int t = 0; t < dim_; ++t) permute(coords_[t]);
  permute(masses_);
  permute(components_);
  if (!nn_.empty()) permute(nn_);

  grid_.cell_start.assign(total_cells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) grid_.cell_start[cell_id[order[i]] + 1]++;
  for (std::size_t c = 0; c < total_cells; ++c) grid_.cell_start[c + 1] += grid_.cell_start[c];
}

void DiscreteMeasure::compute_spacing_stats() {
  const std::size_t n = masses_.size();
  if (n < 2) {
    resolution_floor_ = 0.0;
    median_nn_ = 0.0;
    min_nn_ = 0.0;
    nn_.assign(n, 0.0);
    return;
  }
  double min_cell = grid_.size[0];
  for (int t = 1; t < dim_; ++t) min_cell = std::min(min_cell, grid_.size[t]);

  std::vector<double> nn(n);
  std::vector<int> idx(dim_), lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < n; ++i) {
    Point x = atom(i);
    int home[kMaxDim];
    for (int t = 0; t < dim_; ++t) {
      int c = static_cast<int>((x[t] - grid_.lo[t]) / grid_.size[t]);
      home[t] = std::clamp(c, 0, grid_.cells[t] - 1);
    }
    double best = std::numeric_limits<double>::infinity();
    int max_ring = 0;
    for (int t = 0; t < dim_; ++t) max_ring = std::max(max_ring, grid_.cells[t]);
    for (int ring = 0; ring <= max_ring; ++ring) {
      if (ring > 0 && (ring - 1) * min_cell > best) break;
      // visit cells at Chebyshev cell-offset == ring
      for (int t = 0; t < dim_; ++t) {
        lo[t] = std::max(0, home[t] - ring);
        hi[t] = std::min(grid_.cells[t] - 1, home[t] + ring);
        idx[t] = lo[t];
      }
      bool more = true;
      while (more) {
        int cheb = 0;
        for (int t = 0; t < dim_; ++t) cheb = std::max(cheb, std::abs(idx[t] - home[t]));
        if (cheb == ring) {
          std::size_t id = 0;
          for (int t = 0; t < dim_; ++t) id = id * grid_.cells[t] + idx[t];
          for (std::size_t a = grid_.cell_start[id]; a < grid_.cell_start[id + 1]; ++a) {
            if (a == i) continue;
            double d2 = 0.0;
            for (int t = 0; t < dim_; ++t) {
              const double d = coords_[t][a] - x[t];
              d2 += d * d;
            }
            best = std::min(best, std::sqrt(d2));
          }
        }
        int t = dim_ - 1;
        while (t >= 0 && idx[t] == hi[t]) {
          idx[t] = lo[t];
          --t;
        }
        if (t < 0)
          more = false;
        else
          ++idx[t];
      }
    }
    nn[i] = best;
  }
  std::vector<double> sorted = nn;
  std::sort(sorted.begin(), sorted.end());
  min_nn_ = sorted.front();
  median_nn_ = sorted[sorted.size() / 2];
  resolution_floor_ = 2.0 * sorted.back();
}

Point DiscreteMeasure::atom(std::size_t i) const {
  Point p(dim_);
  for (int t = 0; t < dim_; ++t) p[t] = coords_[t][i];
  return p;
}

Cube DiscreteMeasure::support_cube(const Point& center) const {
  double h = 0.0;
  for (int t = 0; t < dim_; ++t)
    h = std::max(h, std::max(std::abs(bbox_lo_[t] - center[t]), std::abs(bbox_hi_[t] - center[t])));
  return Cube(center, 2.0 * h);
}

simd::AtomBlock DiscreteMeasure::block(std::size_t begin, std::size_t end,
                                       const double* weights) const {
  simd::AtomBlock b;
  for (int t = 0; t < dim_; ++t) b.coord[t] = coords_[t].data() + begin;
  b.weight = weights + begin;
  b.count = end - begin;
  b.dim = dim_;
  return b;
}

void DiscreteMeasure::for_each_range(
    const Point& qlo, const Point& qhi,
    const std::function<void(std::size_t, std::size_t)>& fn) const {
  int lo[kMaxDim], hi[kMaxDim];
  for (int t = 0; t < dim_; ++t) {
    if (qhi[t] < bbox_lo_[t] || qlo[t] > bbox_hi_[t]) return;  // disjoint from support
    lo[t] = std::clamp(static_cast<int>((qlo[t] - grid_.lo[t]) / grid_.size[t]), 0,
                       grid_.cells[t] - 1);
    hi[t] = std::clamp(static_cast<int>((qhi[t] - grid_.lo[t]) / grid_.size[t]), 0,
                       grid_.cells[t] - 1);
  }
  // innermost axis is contiguous in the CSR layout
  int idx[kMaxDim];
  for (int t = 0; t < dim_; ++t) idx[t] = lo[t];
  const int last = dim_ - 1;
  while (true) {
    std::size_t row = 0;
    for (int t = 0; t < last; ++t) row = row * grid_.cells[t] + idx[t];
    const std::size_t first = row * grid_.cells[last] + lo[last];
    const std::size_t stop = row * grid_.cells[last] + hi[last];
    const std::size_t a = grid_.cell_start[first];
    const std::size_t b = grid_.cell_start[stop + 1];
    if (b > a) fn(a, b);
    int t = last - 1;
    while (t >= 0 && idx[t] == hi[t]) {
      idx[t] = lo[t];
      --t;
    }
    if (t < 0) break;
    ++idx[t];
  }
}

namespace {
Point offset(const Point& x, double d) {
  Point p = x;
  for (int t = 0; t < p.dim(); ++t) p[t] += d;
  return p;
}
}  // namespace

double DiscreteMeasure::ball_mass(const Point& x, double r) const {
  return sum_in_ball(masses_, x, r);
}

double DiscreteMeasure::cube_mass(const Cube& q) const {
  if (q.is_whole_space()) return total_mass_;
  return sum_in_cube(masses_, q);
}

std::vector<std::size_t> DiscreteMeasure::atoms_in_cube(const Cube& q) const {
  std::vector<std::size_t> out;
  if (q.is_whole_space()) {
    out.resize(atom_count());
    std::iota(out.begin(), out.end(), std::size_t{0});
    return out;
  }
  const double h = q.half();
  for_each_range(offset(q.center(), -h), offset(q.center(), h),
                 [&](std::size_t a, std::size_t b) {
                   for (std::size_t i = a; i < b; ++i) {
                     double ch = 0.0;
                     for (int t = 0; t < dim_; ++t)
                       ch = std::max(ch, std::abs(coords_[t][i] - q.center()[t]));
                     if (ch <= h) out.push_back(i);
                   }
                 });
  return out;
}

double DiscreteMeasure::sum_in_ball(const std::vector<double>& values, const Point& x,
                                    double r) const {
  if (r < 0.0) throw std::invalid_argument("ball query: negative radius");
  const auto& k = simd::active();
  double acc = 0.0;
  for_each_range(offset(x, -r), offset(x, r),
                 [&](std::size_t a, std::size_t b) { acc += k.sum_in_ball(block(a, b, values.data()), x.data(), r); });
  return acc;
}

double DiscreteMeasure::sum_in_cube(const std::vector<double>& values, const Cube& q) const {
  if (q.is_whole_space()) return kahan_total(values);
  const auto& k = simd::active();
  const double h = q.half();
  double acc = 0.0;
  for_each_range(offset(q.center(), -h), offset(q.center(), h),
                 [&](std::size_t a, std::size_t b) {
                   acc += k.sum_in_cube(block(a, b, values.data()), q.center().data(), h);
                 });
  return acc;
}

double DiscreteMeasure::invpow_shell_sum(const std::vector<double>& values, const Point& c,
                                         double h_in, double h_out) const {
  const auto& k = simd::active();
  double acc = 0.0;
  const double reach = std::isfinite(h_out) ? h_out : max_extent_ + diameter_ + 1.0;
  for_each_range(offset(c, -reach), offset(c, reach), [&](std::size_t a, std::size_t b) {
    acc += k.sum_invpow_shell(block(a, b, values.data()), c.data(), h_in, h_out, n_);
  });
  return acc;
}

double DiscreteMeasure::invpow_annulus_sum(const std::vector<double>& values, const Point& c,
                                           double r_in, double r_out) const {
  const auto& k = simd::active();
  double acc = 0.0;
  const double reach = std::isfinite(r_out) ? r_out : max_extent_ + diameter_ + 1.0;
  for_each_range(offset(c, -reach), offset(c, reach), [&](std::size_t a, std::size_t b) {
    acc += k.sum_invpow_annulus(block(a, b, values.data()), c.data(), r_in, r_out, n_);
  });
  return acc;
}

double DiscreteMeasure::radial_profile_sum(const std::vector<double>& values, const Point& c,
                                           const simd::RadialProfile& p) const {
  const auto& k = simd::active();
  double acc = 0.0;
  const double reach = std::isfinite(p.r_supp) ? p.r_supp : max_extent_ + diameter_ + 1.0;
  for_each_range(offset(c, -reach), offset(c, reach), [&](std::size_t a, std::size_t b) {
    acc += k.sum_radial_profile(block(a, b, values.data()), c.data(), p);
  });
  return acc;
}

double DiscreteMeasure::hilbert_sum(const std::vector<double>& values, double x,
                                    double eps) const {
  if (dim_ != 1) throw std::invalid_argument("hilbert_sum: 1-d measures only");
  return simd::active().sum_hilbert(block(0, masses_.size(), values.data()), x, eps);
}

std::pair<double, double> DiscreteMeasure::cauchy_sum(const std::vector<double>& values,
                                                      const Point& c, double eps) const {
  if (dim_ != 2) throw std::invalid_argument("cauchy_sum: 2-d measures only");
  double re = 0.0, im = 0.0;
  simd::active().sum_cauchy(block(0, masses_.size(), values.data()), c.data(), eps, &re, &im);
  return {re, im};
}

void DiscreteMeasure::distances_to(const Point& x, std::vector<double>& out) const {
  out.resize(masses_.size());
  simd::active().euclid_distances(block(0, masses_.size(), masses_.data()), x.data(), out.data());
}

GrowthReport DiscreteMeasure::verify_growth(int samples, double tol, Rng& rng, double r_lo,
                                            double r_hi) const {
  if (samples < 1) throw std::invalid_argument("verify_growth: samples >= 1 required");
  GrowthReport rep;
  rep.tol = tol;
  if (r_lo <= 0.0) r_lo = resolution_floor_;
  if (r_lo <= 0.0) r_lo = std::max(1e-9, 1e-9 * diameter_);
  if (r_hi <= 0.0) r_hi = std::max(2.0 * diameter_, r_lo * 2.0);

  std::vector<std::size_t> pts;
  const std::size_t n = atom_count();
  if (static_cast<std::size_t>(samples) >= n) {
    pts.resize(n);
    std::iota(pts.begin(), pts.end(), std::size_t{0});
  } else {
    for (int s = 0; s < samples; ++s) pts.push_back(uniform_index(rng, n));
  }

  const double ratio = std::pow(2.0, 0.25);
  std::vector<double> radii;
  for (double r = r_lo; r <= r_hi * (1.0 + 1e-12); r *= ratio) radii.push_back(r);
  rep.points_sampled = static_cast<int>(pts.size());
  rep.radii_sampled = static_cast<int>(radii.size());

  rep.worst_x = atom(pts.front());
  for (std::size_t pi : pts) {
    const Point x = atom(pi);
    for (double r : radii) {
      const double q = ball_mass(x, r) / std::pow(r, n_);
      if (q > rep.max_ratio) {
        rep.max_ratio = q;
        rep.worst_x = x;
        rep.worst_r = r;
      }
    }
  }
  rep.passed = rep.max_ratio <= c0_ * (1.0 + tol);
  return rep;
}

std::string DiscreteMeasure::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = dim_;
  j["n"] = n_;
  j["c0"] = c0_;
  auto atoms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < atom_count(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (int t = 0; t < dim_; ++t) row.push_back(coords_[t][i]);
    row.push_back(masses_[i]);
    atoms.push_back(std::move(row));
  }
  j["atoms"] = std::move(atoms);
  if (std::any_of(components_.begin(), components_.end(), [](int c) { return c != 0; }))
    j["components"] = components_;
  return j.dump(2);
}

DiscreteMeasure DiscreteMeasure::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int d = j.at("d").get<int>();
  std::vector<Point> pts;
  std::vector<double> ms;
  for (const auto& row : j.at("atoms")) {
    if (static_cast<int>(row.size()) != d + 1)
      throw std::invalid_argument("measure json: atom row must hold d coords plus mass");
    Point p(d);
    for (int t = 0; t < d; ++t) p[t] = row[t].get<double>();
    pts.push_back(p);
    ms.push_back(row[d].get<double>());
  }
  std::vector<int> comps;
  if (j.contains("components")) comps = j["components"].get<std::vector<int>>();
  return DiscreteMeasure(d, j.at("n").get<double>(), j.at("c0").get<double>(), std::move(pts),
                         std::move(ms), std::move(comps));
}

GridFunction::GridFunction(const DiscreteMeasure& m, std::vector<double> values)
    : m_(&m), v_(std::move(values)) {
  if (v_.size() != m.atom_count())
    throw std::invalid_argument("grid function: length must match atom count");
  for (double x : v_)
    if (!std::isfinite(x)) throw std::invalid_argument("grid function: values must be finite");
}

GridFunction GridFunction::constant(const DiscreteMeasure& m, double value) {
  return GridFunction(m, std::vector<double>(m.atom_count(), value));
}

GridFunction GridFunction::indicator(const DiscreteMeasure& m, const Cube& q) {
  std::vector<double> v(m.atom_count(), 0.0);
  for (std::size_t i = 0; i < m.atom_count(); ++i)
    if (q.contains(m.atom(i))) v[i] = 1.0;
  return GridFunction(m, std::move(v));
}

std::vector<double> GridFunction::abs_times_mass() const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = std::abs(v_[i]) * m_->mass(i);
  return out;
}

std::vector<double> GridFunction::times_mass() const {
  std::vector<double> out(v_.size());
  for (std::size_t i = 0; i < v_.size(); ++i) out[i] = v_[i] * m_->mass(i);
  return out;
}

DiscreteMeasure lebesgue_interval(int res) {
  if (res < 2) throw std::invalid_argument("lebesgue_interval: res >= 2 required");
  std::vector<Point> pts;
  std::vector<double> ms(res, 1.0 / res);
  for (int i = 0; i < res; ++i) pts.push_back(Point{(i + 0.5) / res});
  return DiscreteMeasure(1, 1.0, 2.0, std::move(pts), std::move(ms));
}

DiscreteMeasure lebesgue_square(int res) {
  if (res < 2) throw std::invalid_argument("lebesgue_square: res >= 2 required");
  std::vector<Point> pts;
  std::vector<double> ms;
  const double m = 1.0 / (double(res) * res);
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      pts.push_back(Point{(i + 0.5) / res, (j + 0.5) / res});
      ms.push_back(m);
    }
  return DiscreteMeasure(2, 1.0, 4.0, std::move(pts), std::move(ms));
}

DiscreteMeasure saksman_intervals(int k_count, int res_per_interval) {
  if (k_count < 2 || k_count > 20)
    throw std::invalid_argument("saksman_intervals: K in [2, 20] required");
  if (res_per_interval < 2) throw std::invalid_argument("saksman_intervals: res >= 2 required");
  std::vector<Point> pts;
  std::vector<double> ms;
  std::vector<int> comp;
  double factorial = 1.0;
  double prev_left = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_count; ++k) {
    factorial *= k;
    const double len_k = 1.0 / factorial;           // l_k = 1/k!
    const double left = 1.0 / k - len_k / 4.0;      // I_k = (1/k - l_k/4, 1/k + l_k/4)
    const double right = 1.0 / k + len_k / 4.0;
    if (right >= prev_left)
      throw std::invalid_argument("saksman_intervals: intervals overlap");
    prev_left = left;
    const double step = (len_k / 2.0) / res_per_interval;
    for (int i = 0; i < res_per_interval; ++i) {
      pts.push_back(Point{left + (i + 0.5) * step});
      ms.push_back(step);
      comp.push_back(k);
    }
  }
  return DiscreteMeasure(1, 1.0, 2.0, std::move(pts), std::move(ms), std::move(comp));
}

DiscreteMeasure ad_regular_line(int res) {
  if (res < 2) throw std::invalid_argument("ad_regular_line: res >= 2 required");
  std::vector<Point> pts;
  std::vector<double> ms(res, 1.0 / res);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < res; ++i) {
    const double t = (i + 0.5) / res;
    pts.push_back(Point{t * inv_sqrt2, t * inv_sqrt2});
  }
  return DiscreteMeasure(2, 1.0, 2.0, std::move(pts), std::move(ms));
}

DiscreteMeasure from_atoms(int dim, double growth_exponent, double growth_constant,
                           const std::vector<std::pair<Point, double>>& atoms,
                           std::vector<int> components) {
  std::vector<Point> pts;
  std::vector<double> ms;
  for (const auto& [p, m] : atoms) {
    pts.push_back(p);
    ms.push_back(m);
  }
  return DiscreteMeasure(dim, growth_exponent, growth_constant, std::move(pts), std::move(ms),
                         std::move(components));
}

DiscreteMeasure generate_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, long> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("generator spec: expected key=value");
      args[item.substr(0, eq)] = std::stol(item.substr(eq + 1));
    }
  }
  auto arg = [&](const std::string& key, long fallback) {
    auto it = args.find(key);
    return it == args.end() ? fallback : it->second;
  };
  if (name == "lebesgue_interval" || name == "interval")
    return lebesgue_interval(static_cast<int>(arg("res", 4096)));
  if (name == "lebesgue_square" || name == "square")
    return lebesgue_square(static_cast<int>(arg("res", 48)));
  if (name == "saksman")
    return saksman_intervals(static_cast<int>(arg("K", 6)), static_cast<int>(arg("res", 200)));
  if (name == "line") return ad_regular_line(static_cast<int>(arg("res", 500)));
  throw std::invalid_argument("generator spec: unknown kind '" + name + "'");
}

}  // namespace ndcz
