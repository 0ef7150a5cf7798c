#include "wbp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "wbp/error.hpp"

namespace wbp {

PairPtr make_pair_ptr(MetricPair pair) {
  return std::make_shared<const MetricPair>(std::move(pair));
}

bool same_pair(const PairPtr& a, const PairPtr& b) {
  if (!a || !b) return false;
  return a == b || *a == *b;
}

DiscreteMeasure::DiscreteMeasure(PairPtr pair, std::vector<Atom> atoms)
    : pair_(std::move(pair)), atoms_(std::move(atoms)) {
  if (!pair_) throw Error(ErrorCode::invalid_argument, "measure needs a metric pair");
  for (const Atom& atom : atoms_) {
    if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) {
      throw Error(ErrorCode::non_positive_mass, "atom at " + to_string(atom.point) +
                                                    " has mass " + std::to_string(atom.mass));
    }
    if (pair_->in_boundary(atom.point)) {
      throw Error(ErrorCode::atom_on_boundary, "atom at " + to_string(atom.point) + " lies on A");
    }
  }
}

DiscreteMeasure::DiscreteMeasure(PairPtr pair, std::vector<Atom> atoms, Trusted)
    : pair_(std::move(pair)), atoms_(std::move(atoms)) {}

DiscreteMeasure DiscreteMeasure::zero(PairPtr pair) { return DiscreteMeasure(std::move(pair), {}); }

double DiscreteMeasure::total_mass() const {
  double total = 0.0;
  for (const Atom& atom : atoms_) total += atom.mass;
  return total;
}

DiscreteMeasure DiscreteMeasure::canonical() const {
  std::map<Point, double> merged;
  for (const Atom& atom : atoms_) merged[atom.point] += atom.mass;
  std::vector<Atom> atoms;
  atoms.reserve(merged.size());
  for (auto& [point, mass] : merged) atoms.push_back({point, mass});
  return DiscreteMeasure(pair_, std::move(atoms), Trusted{});
}

double p_energy(const DiscreteMeasure& mu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must be finite and >= 1");
  double total = 0.0;
  for (const Atom& atom : mu.atoms()) {
    total += atom.mass * std::pow(mu.pair().dist_to_boundary(atom.point), p);
  }
  return total;
}

DiscreteMeasure truncate(const DiscreteMeasure& mu, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "truncation radius must be positive");
  std::vector<Atom> kept;
  for (const Atom& atom : mu.atoms()) {
    if (mu.pair().dist_to_boundary(atom.point) > r) kept.push_back(atom);
  }
  return DiscreteMeasure(mu.pair_ptr(), std::move(kept));
}

namespace {

bool close_points(const Point& a, const Point& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double scale = 1.0 + std::max(std::abs(a[k]), std::abs(b[k]));
    if (std::abs(a[k] - b[k]) > tol * scale) return false;
  }
  return true;
}

}  // namespace

bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double mass_tol,
                  double point_tol) {
  // Cluster the union of atoms by point tolerance, then compare masses per
  // cluster. Canonical forms are sorted, so clusters are found greedily.
  struct Cluster {
    Point rep;
    double mass_a = 0.0;
    double mass_b = 0.0;
  };
  std::vector<Cluster> clusters;
  auto add = [&](const Atom& atom, bool first) {
    for (Cluster& c : clusters) {
      if (close_points(c.rep, atom.point, point_tol)) {
        (first ? c.mass_a : c.mass_b) += atom.mass;
        return;
      }
    }
    Cluster c{atom.point};
    (first ? c.mass_a : c.mass_b) = atom.mass;
    clusters.push_back(std::move(c));
  };
  const DiscreteMeasure ca = a.canonical();
  const DiscreteMeasure cb = b.canonical();
  for (const Atom& atom : ca.atoms()) add(atom, true);
  for (const Atom& atom : cb.atoms()) add(atom, false);
  return std::all_of(clusters.begin(), clusters.end(), [&](const Cluster& c) {
    return std::abs(c.mass_a - c.mass_b) <= mass_tol;
  });
}

PersistenceDiagram::PersistenceDiagram(PairPtr pair, std::vector<Point> points)
    : pair_(std::move(pair)), points_(std::move(points)) {
  if (!pair_) throw Error(ErrorCode::invalid_argument, "diagram needs a metric pair");
  for (const Point& x : points_) {
    if (pair_->in_boundary(x)) {
      throw Error(ErrorCode::atom_on_boundary, "diagram point " + to_string(x) + " lies on A");
    }
  }
}

PersistenceDiagram::PersistenceDiagram(std::vector<Point> points)
    : PersistenceDiagram(make_pair_ptr(MetricPair::half_plane()), std::move(points)) {}

DiscreteMeasure diagram_to_measure(const PersistenceDiagram& diagram) {
  std::vector<Atom> atoms;
  atoms.reserve(diagram.size());
  for (const Point& x : diagram.points()) atoms.push_back({x, 1.0});
  return DiscreteMeasure(diagram.pair_ptr(), std::move(atoms)).canonical();
}

}  // namespace wbp
