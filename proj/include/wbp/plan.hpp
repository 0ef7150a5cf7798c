#pragma once

#include <span>
#include <utility>
#include <vector>

#include "wbp/measure.hpp"

namespace wbp {

/// Marginal-match tolerance used when gluing and when checking admissibility.
inline constexpr double kMarginalTolerance = 1e-10;

struct PlanEntry {
  Point source;
  Point target;
  double mass = 0.0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// A finitely supported partial transport plan on X x X minus A x A.
class TransportPlan {
 public:
  /// Rejects entries with both endpoints on A and entries with mass <= 0.
  TransportPlan(PairPtr pair, std::vector<PlanEntry> entries, double p = 2.0);

  const MetricPair& pair() const { return *pair_; }
  const PairPtr& pair_ptr() const { return pair_; }
  std::span<const PlanEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Exponent the plan was built for; informational.
  double exponent() const { return p_; }

 private:
  PairPtr pair_;
  std::vector<PlanEntry> entries_;
  double p_;
};

/// Sum of mass * d(source, target)^p.
double cost(const TransportPlan& plan, double p);

/// Omega-restricted marginals (first, second), in canonical form.
std::pair<DiscreteMeasure, DiscreteMeasure> marginals(const TransportPlan& plan);

struct PlanParts {
  TransportPlan interior;       // source and target in Omega
  TransportPlan to_boundary;    // source in Omega, target in A
  TransportPlan from_boundary;  // source in A, target in Omega
};

PlanParts decompose(const TransportPlan& plan);

struct Triple {
  Point first;
  Point middle;
  Point last;
  double mass = 0.0;
};

/// Mass sitting on a diagonal point (a, a) of A x A.
struct DiagonalDefect {
  Point point;
  double mass = 0.0;
};

/// A three-marginal coupling whose (1,2) and (2,3) projections recover the
/// two glued plans up to diagonal-on-A defects.
struct GluedPlan {
  PairPtr pair;
  std::vector<Triple> triples;
  std::vector<DiagonalDefect> defect12;
  std::vector<DiagonalDefect> defect23;
};

/// Glues plan12 (between mu1 and mu2) with plan23 (between mu2 and mu3).
/// Interior middle atoms use proportional disintegration: incoming mass m_i
/// and outgoing mass n_j at a middle atom of total mass M give a triple of
/// mass m_i * n_j / M. Boundary-sided remainders become (x, a, a) and
/// (a, a, z) triples. Throws Error(marginal_mismatch) when the Omega-restricted
/// second marginal of plan12 and first marginal of plan23 differ.
GluedPlan glue(const TransportPlan& plan12, const TransportPlan& plan23);

/// (1,3) projection restricted to X x X minus A x A.
TransportPlan compose(const GluedPlan& glued);

/// Raw (1,2) and (2,3) projections, duplicates merged. May contain A x A pairs.
std::vector<PlanEntry> project12(const GluedPlan& glued);
std::vector<PlanEntry> project23(const GluedPlan& glued);

/// Adds diagonal defects as (a, a) entries to a coupling.
std::vector<PlanEntry> with_defects(std::span<const PlanEntry> coupling,
                                    std::span<const DiagonalDefect> defects);

/// Multiset comparison of couplings: duplicates merged per (source, target),
/// masses compared within tol.
bool same_coupling(std::span<const PlanEntry> a, std::span<const PlanEntry> b, double tol);

}  // namespace wbp
