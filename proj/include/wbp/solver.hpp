#pragma once

#include <map>
#include <vector>

#include "wbp/measure.hpp"
#include "wbp/plan.hpp"
#include "wbp/rational.hpp"

namespace wbp {

/// Direct cost d(x, y)^p.
double cost_c(const MetricPair& pair, const Point& x, const Point& y, double p);

/// Reduced cost min{d(x, y)^p, d(x, A)^p + d(y, A)^p}: the cheaper of moving
/// mass directly or destroying it at A and recreating it there.
double cost_ctilde(const MetricPair& pair, const Point& x, const Point& y, double p);

/// Whether the direct route is no more expensive than the route via A,
/// i.e. cost_c - cost_ctilde <= tol.
bool in_S(const MetricPair& pair, const Point& x, const Point& y, double p, double tol);

/// Balanced transportation problem with one aggregated boundary node per side.
///
/// Rows are the source atoms followed by the boundary source; columns are the
/// sink atoms followed by the boundary sink. The boundary source supplies
/// B(nu), the boundary sink demands B(mu), so both sides total B(mu) + B(nu).
/// Direct cells carry d(x_i, y_j)^p, boundary cells d(x_i, A)^p and
/// d(y_j, A)^p, the corner 0.
struct AugmentedProblem {
  PairPtr pair;
  double p = 2.0;
  std::vector<Atom> sources;  // canonical atoms of mu
  std::vector<Atom> sinks;    // canonical atoms of nu
  double boundary_supply = 0.0;
  double boundary_demand = 0.0;
  std::vector<double> cost;  // row-major, rows() x cols()

  std::size_t rows() const { return sources.size() + 1; }
  std::size_t cols() const { return sinks.size() + 1; }
  double at(std::size_t i, std::size_t j) const { return cost[i * cols() + j]; }
  std::vector<double> supplies() const;
  std::vector<double> demands() const;
};

AugmentedProblem build_augmented_problem(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         double p);

/// Kantorovich potentials on the atoms of both marginals. Both potentials are
/// zero on A; phi[x] + psi[y] <= d(x, y)^p, phi[x] <= d(x, A)^p and
/// psi[y] <= d(y, A)^p, with equality wherever the plan carries mass.
struct DualPotentials {
  std::map<Point, double> phi;
  std::map<Point, double> psi;
};

struct Solution {
  double wb = 0.0;    // (optimal cost)^(1/p)
  double cost = 0.0;  // optimal cost
  TransportPlan plan;
  DualPotentials duals;
  /// The optimal face contains more than one vertex; the plan returned is the
  /// deterministic pivot-selected one.
  bool alternative_optimum = false;
  std::size_t pivots = 0;
};

/// Optimal partial transport between mu and nu for exponent p >= 1.
///
/// Boundary flows are materialised as x -> proj_A(x) and proj_A(y) -> y
/// entries. Throws Error(pair_mismatch) and Error(invalid_argument) for p < 1.
Solution solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Wb_p(mu, nu).
double wb_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// Optimal cost Wb_p^p computed with exact rational pivoting. Needs an even p
/// on the Euclidean kinds; finite pairs accept any positive integer p.
/// Throws Error(invalid_argument) when the exponent rules are not met.
Rational solve_exact_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p);

struct DiagramMatching {
  double dp = 0.0;
  TransportPlan matching;
  std::vector<std::pair<Point, Point>> matched;  // one pair per unit of multiplicity
  std::vector<Point> deletions;                  // points of sigma sent to A
  std::vector<Point> insertions;                 // points of tau created from A
};

/// d_p between finite diagrams, computed as Wb_p of the embedded counting
/// measures. The optimal vertex is integral, so the plan decodes into a
/// partial bijection plus deletions and insertions.
DiagramMatching diagram_distance(const PersistenceDiagram& sigma, const PersistenceDiagram& tau,
                                 double p);

}  // namespace wbp
