#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wbp/metric_pair.hpp"

namespace wbp {

using PairPtr = std::shared_ptr<const MetricPair>;

PairPtr make_pair_ptr(MetricPair pair);

/// True when both handles refer to the same pair or to structurally equal ones.
bool same_pair(const PairPtr& a, const PairPtr& b);

struct Atom {
  Point point;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finitely supported non-negative measure on X \ A.
///
/// Atoms keep multiset semantics: the same point may appear more than once.
/// canonical() merges duplicates and sorts by point.
class DiscreteMeasure {
 public:
  /// Rejects atoms with mass <= 0 (non_positive_mass) and atoms within
  /// kMembershipTolerance of A (atom_on_boundary).
  DiscreteMeasure(PairPtr pair, std::vector<Atom> atoms);

  static DiscreteMeasure zero(PairPtr pair);

  const MetricPair& pair() const { return *pair_; }
  const PairPtr& pair_ptr() const { return pair_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;

  DiscreteMeasure canonical() const;

 private:
  struct Trusted {};
  DiscreteMeasure(PairPtr pair, std::vector<Atom> atoms, Trusted);

  PairPtr pair_;
  std::vector<Atom> atoms_;
};

/// Sum of mass * d(x, A)^p, the p-th power of the distance to the zero measure.
double p_energy(const DiscreteMeasure& mu, double p);

/// Restriction of mu to {x : d(x, A) > r}.
DiscreteMeasure truncate(const DiscreteMeasure& mu, double r);

/// Atomwise comparison of canonical forms. Points are matched when every
/// coordinate agrees within point_tol * (1 + |coordinate|); masses within
/// mass_tol.
bool approx_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double mass_tol,
                  double point_tol = 0.0);

/// A finite persistence diagram: a multiset of off-boundary points, each of
/// unit mass.
class PersistenceDiagram {
 public:
  PersistenceDiagram(PairPtr pair, std::vector<Point> points);
  explicit PersistenceDiagram(std::vector<Point> points);

  const MetricPair& pair() const { return *pair_; }
  const PairPtr& pair_ptr() const { return pair_; }
  std::span<const Point> points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  PairPtr pair_;
  std::vector<Point> points_;
};

DiscreteMeasure diagram_to_measure(const PersistenceDiagram& diagram);

}  // namespace wbp
