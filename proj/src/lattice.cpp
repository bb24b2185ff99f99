#include "ndcz/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace ndcz {

namespace {

struct ShellEntry {
  double cheb;
  double contrib;  // mass / euclid^n, 0 for coincident atoms
};

}  // namespace

Lattice Lattice::build(const DiscreteMeasure& m, double a, int k_span,
                       const LatticeOptions& opts) {
  if (m.atom_count() == 0) throw std::invalid_argument("lattice: empty measure");
  if (a < opts.a_min) throw std::invalid_argument("lattice: A below A_min");
  if (k_span < 1) throw std::invalid_argument("lattice: k_span >= 1 required");

  Lattice lat;
  lat.m_ = &m;
  lat.a_ = a;
  lat.eps_tol_ = opts.epsilon_tol_factor * a;
  lat.k_max_ = k_span;
  const std::size_t count = m.atom_count();
  lat.sides_.resize(count);
  lat.increments_.resize(count);
  lat.stop_.assign(count, 0);

  const double r_min = m.resolution_floor();
  const double n = m.growth_exponent();
  std::vector<double> eu;
  std::vector<ShellEntry> entries(count);
  std::vector<double> prefix(count + 1);

  for (std::size_t i = 0; i < count; ++i) {
    const Point x = m.atom(i);
    m.distances_to(x, eu);
    for (std::size_t j = 0; j < count; ++j) {
      const double ch = cheb_dist(m.atom(j), x);
      entries[j].cheb = ch;
      entries[j].contrib =
          eu[j] > 0.0 ? m.mass(j) / simd::pow_from_sq(eu[j] * eu[j], n) : 0.0;
    }
    std::sort(entries.begin(), entries.end(),
              [](const ShellEntry& u, const ShellEntry& v) { return u.cheb < v.cheb; });
    prefix[0] = 0.0;
    for (std::size_t j = 0; j < count; ++j) prefix[j + 1] = prefix[j] + entries[j].contrib;

    // P(h): accumulated contribution of atoms with cheb distance <= h
    auto p_at = [&](double h) {
      std::size_t lo = 0, hi = count;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (entries[mid].cheb <= h)
          lo = mid + 1;
        else
          hi = mid;
      }
      return prefix[lo];
    };

    auto& sides = lat.sides_[i];
    auto& incr = lat.increments_[i];
    sides.push_back(2.0 * entries.back().cheb);  // initial cube holds the support
    int k = 1;
    for (; k <= k_span; ++k) {
      const double side_prev = sides.back();
      const double p_prev = p_at(side_prev / 2.0);
      const double cap = side_prev / opts.scale_gap;
      const double target = p_prev - a;

      // smallest entry index with prefix >= target
      std::size_t j_star =
          std::lower_bound(prefix.begin(), prefix.end(), target) - prefix.begin();

      double best_side = -1.0, best_delta = 0.0;
      auto consider = [&](double side) {
        if (side < r_min || side > cap || side <= 0.0) return;
        const double d = p_prev - p_at(side / 2.0);
        if (std::abs(d - a) > lat.eps_tol_) return;
        if (best_side < 0.0 || std::abs(d - a) < std::abs(best_delta - a)) {
          best_side = side;
          best_delta = d;
        }
      };
      if (j_star >= 1 && j_star <= count) {
        consider(2.0 * entries[j_star - 1].cheb);
        // one notch wider shell: sides strictly between the previous distinct
        // cheb distance and this one give the next-larger increment
        std::size_t g = j_star - 1;
        while (g > 0 && entries[g - 1].cheb == entries[j_star - 1].cheb) --g;
        const double below = g > 0 ? entries[g - 1].cheb : 0.0;
        if (below > 0.0 && below < entries[j_star - 1].cheb)
          consider(below + entries[j_star - 1].cheb);  // midpoint * 2
      }
      if (best_side < 0.0) {
        // heavy-core fallback: the /scale_gap cap already overshoots A
        const double d_cap = p_prev - p_at(cap / 2.0);
        if (d_cap > a + lat.eps_tol_ && cap >= r_min) {
          sides.push_back(cap);
          incr.push_back(d_cap);
          continue;
        }
        break;  // stopping: resolution or mass exhausted
      }
      sides.push_back(best_side);
      incr.push_back(best_delta);
    }
    lat.stop_[i] = static_cast<int>(lat.sides_[i].size());
  }

  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t k = 1; k < lat.increments_[i].size() + 1; ++k)
      if (static_cast<int>(k) >= 2)  // both ends of the pair are transit cubes
        lat.eps_observed_ = std::max(lat.eps_observed_, std::abs(lat.increments_[i][k - 1] - a));
  return lat;
}

void Lattice::check_atom(std::size_t atom) const {
  if (atom >= sides_.size()) throw std::out_of_range("lattice: atom index");
}

void Lattice::check_scale(int k) const {
  if (k < 0 || k > k_max_) throw std::out_of_range("lattice: scale index");
}

double Lattice::side(std::size_t atom, int k) const {
  check_atom(atom);
  check_scale(k);
  return k < stop_[atom] ? sides_[atom][k] : 0.0;
}

CubeClass Lattice::classify(std::size_t atom, int k) const {
  check_atom(atom);
  check_scale(k);
  if (k == 0) return CubeClass::initial;
  return k < stop_[atom] ? CubeClass::transit : CubeClass::stopping;
}

Cube Lattice::cube(std::size_t atom, int k) const {
  return Cube(m_->atom(atom), side(atom, k));
}

double Lattice::increment(std::size_t atom, int k) const {
  check_atom(atom);
  if (k < 1 || k >= stop_[atom]) throw std::out_of_range("lattice: no increment at this scale");
  return increments_[atom][k - 1];
}

ScaleClass Lattice::ad_class(const Cube& q) const {
  if (q.is_whole_space()) return {ScaleClass::Kind::above_all, 0};
  const auto candidates = m_->atoms_in_cube(q.scaled(2.0));
  double best_side = std::numeric_limits<double>::infinity();
  int best_k = -1;
  std::size_t best_atom = 0;
  for (std::size_t a : candidates) {
    const Point z = m_->atom(a);
    const double need = cheb_dist(z, q.center()) + q.half();
    // ladder sides decrease in k: deepest containing scale = last side >= 2*need
    const auto& sides = sides_[a];
    int deepest = -1;
    for (int k = 0; k < static_cast<int>(sides.size()); ++k) {
      if (sides[k] / 2.0 >= need)
        deepest = k;
      else
        break;
    }
    if (deepest < 0) continue;
    const double s = sides[deepest];
    if (s < best_side || (s == best_side && deepest > best_k)) {
      best_side = s;
      best_k = deepest;
      best_atom = a;
    }
  }
  if (best_k < 0) return {ScaleClass::Kind::above_all, 0};
  // pick the deepest witness within the 100/99 window of the infimum
  for (std::size_t a : candidates) {
    const Point z = m_->atom(a);
    const double need = cheb_dist(z, q.center()) + q.half();
    const auto& sides = sides_[a];
    for (int k = static_cast<int>(sides.size()) - 1; k >= 0; --k) {
      if (sides[k] / 2.0 < need) continue;
      if (sides[k] <= best_side * (100.0 / 99.0) && k > best_k) {
        best_k = k;
        best_atom = a;
      }
      break;
    }
  }
  // a positive-side cube two orders below the finest available transit scale
  // is not approximated by any lattice scale
  if (best_k == stop_[best_atom] - 1 && q.side() > 0.0 && best_side > 100.0 * q.side() &&
      stop_[best_atom] <= k_max_)
    return {ScaleClass::Kind::below_all, best_k};
  return {ScaleClass::Kind::at, best_k};
}

std::vector<double> Lattice::lipschitz_sides(int k) const {
  check_scale(k);
  std::vector<double> out(m_->atom_count());
  std::vector<double> eu;
  for (std::size_t i = 0; i < m_->atom_count(); ++i) {
    m_->distances_to(m_->atom(i), eu);
    double best = 0.0;
    for (std::size_t z = 0; z < m_->atom_count(); ++z)
      best = std::max(best, side(z, k) - eu[z]);
    out[i] = best;
  }
  return out;
}

double Lattice::lipschitz_side_at(int k, const Point& x) const {
  check_scale(k);
  std::vector<double> eu;
  m_->distances_to(x, eu);
  double best = 0.0;
  for (std::size_t z = 0; z < m_->atom_count(); ++z) best = std::max(best, side(z, k) - eu[z]);
  return best;
}

Lattice Lattice::with_perturbed_sides(double rel, std::uint64_t seed) const {
  Lattice out = *this;
  Rng rng(seed);
  for (auto& ladder : out.sides_)
    for (std::size_t k = 1; k < ladder.size(); ++k) ladder[k] *= 1.0 + rel * uniform(rng, -1.0, 1.0);
  return out;
}

std::string Lattice::to_json() const {
  nlohmann::ordered_json j;
  j["A"] = a_;
  j["eps_tol"] = eps_tol_;
  j["k_max"] = k_max_;
  j["sides"] = sides_;
  j["increments"] = increments_;
  return j.dump(2);
}

Lattice Lattice::from_json(const DiscreteMeasure& m, const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Lattice lat;
  lat.m_ = &m;
  lat.a_ = j.at("A").get<double>();
  lat.eps_tol_ = j.at("eps_tol").get<double>();
  lat.k_max_ = j.at("k_max").get<int>();
  lat.sides_ = j.at("sides").get<std::vector<std::vector<double>>>();
  lat.increments_ = j.at("increments").get<std::vector<std::vector<double>>>();
  if (lat.sides_.size() != m.atom_count())
    throw std::invalid_argument("lattice json: ladder count must match atom count");
  lat.stop_.resize(lat.sides_.size());
  for (std::size_t i = 0; i < lat.sides_.size(); ++i) {
    if (lat.increments_[i].size() + 1 != lat.sides_[i].size())
      throw std::invalid_argument("lattice json: increments misaligned with sides");
    lat.stop_[i] = static_cast<int>(lat.sides_[i].size());
    for (std::size_t k = 2; k < lat.sides_[i].size(); ++k)
      lat.eps_observed_ =
          std::max(lat.eps_observed_, std::abs(lat.increments_[i][k - 1] - lat.a_));
  }
  return lat;
}

}  // namespace ndcz
