#pragma once

#include <span>
#include <vector>

#include "wbp/parallel.hpp"
#include "wbp/solver.hpp"

namespace wbp {

/// Displacement interpolation along one optimal plan between start and end.
struct GeodesicPath {
  PairPtr pair;
  TransportPlan plan;
  double p = 2.0;
  double length = 0.0;
};

/// Solves Opt(mu0, mu1) and wraps the plan. Throws
/// Error(unsupported_capability) on pairs without geodesics.
GeodesicPath geodesic_path(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double p);

struct Interpolant {
  DiscreteMeasure measure;
  /// Mass of atoms that landed within kMembershipTolerance of A and were
  /// dropped by the restriction to Omega.
  double dropped_mass = 0.0;
  /// Dropped atoms that came from direct Omega -> Omega entries.
  std::size_t dropped_direct_atoms = 0;
  /// Smallest d(., A) over atoms from direct entries; +inf when there are none.
  double min_direct_gap = 0.0;
};

/// mu_t: each entry (x -> y, m) contributes an atom at the geodesic point
/// x_t with mass m, then atoms on A are dropped.
Interpolant interpolate_detailed(const GeodesicPath& path, double t);
DiscreteMeasure interpolate(const GeodesicPath& path, double t);

/// Uniform grid {0, 1/(points-1), ..., 1}.
std::vector<double> uniform_grid(std::size_t points);

/// max over grid pairs (s, t) of |Wb_p(mu_s, mu_t) - |s - t| * length|, with
/// every distance recomputed by a fresh solve.
double check_constant_speed(const GeodesicPath& path, std::span<const double> grid,
                            Execution exec = Execution::parallel);

struct CurvatureRow {
  double t = 0.0;
  double lhs = 0.0;     // Wb_2(base, mu_t)^2
  double rhs = 0.0;     // (1-t) Wb_2(base, from)^2 + t Wb_2(base, to)^2 - (1-t) t Wb_2(from, to)^2
  double margin = 0.0;  // lhs - rhs
};

/// Comparison inequality along the geodesic from `from` to `to`, seen from
/// `base`. Only p = 2 is meaningful; other exponents throw
/// Error(invalid_argument). Both sides are computed with independent solves.
std::vector<CurvatureRow> curvature_table(const DiscreteMeasure& base, const DiscreteMeasure& from,
                                          const DiscreteMeasure& to, std::span<const double> grid,
                                          double p = 2.0, Execution exec = Execution::parallel);

/// Minimum margin of curvature_table.
double curvature_comparison(const DiscreteMeasure& base, const DiscreteMeasure& from,
                            const DiscreteMeasure& to, std::span<const double> grid,
                            double p = 2.0, Execution exec = Execution::parallel);

/// Wb_2(mu, 0)^2 + Wb_2(nu, 0)^2 - Wb_2(mu, nu)^2. Non-negative values mean
/// no obtuse angle at the zero measure.
double angle_at_zero(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct BranchReport {
  /// Exact cost ties: the optimal plan is not unique, so uniqueness-based
  /// conclusions do not apply and the other fields are informational.
  bool degenerate = false;
  /// Every Omega atom of mu_t0 receives mass from exactly one source.
  bool map_induced = false;
  /// Extending the re-solved plan to t = 1 reproduces mu1.
  bool endpoint_reproduced = false;
};

/// Builds mu_t0, re-solves Opt(mu0, mu_t0) and checks that the re-solved
/// plan is induced by a map and extends back to mu1. p must exceed 1.
BranchReport branch_probe(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double t0,
                          double p);

}  // namespace wbp
