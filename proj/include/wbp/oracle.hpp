#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wbp/measure.hpp"
#include "wbp/parallel.hpp"
#include "wbp/rational.hpp"

namespace wbp {

// Brute-force reference values for tiny instances. The oracle never touches
// the solver: it builds the augmented problem with one boundary copy per
// point (rows x_1..x_m, proj_A(y_1)..proj_A(y_n); columns y_1..y_n,
// proj_A(x_1)..proj_A(x_m)) and minimises over its vertices directly.

/// Enumeration limit for brute_force_diagram: |sigma| + |tau|.
inline constexpr std::size_t kOracleDiagramLimit = 8;
/// Per-side limit for the unit-mass route of brute_force_wb.
inline constexpr std::size_t kOracleUnitAtomsLimit = 4;
/// Limit on spanning trees visited by the vertex-enumeration route.
inline constexpr double kOracleVertexLimit = 1e6;

struct OracleResult {
  /// Minimum of the p-th power cost, i.e. Wb_p^p or d_p^p.
  double value = 0.0;
  /// Exact minimum when every cost entry is rational (even p on Euclidean
  /// pairs, integer p on finite pairs).
  std::optional<Rational> exact_value;
  /// Optimal assignment: row index -> column index in the per-point-copy
  /// matrix (permutation route) or the support cells (vertex route).
  std::vector<std::pair<std::size_t, std::size_t>> assignment;
  std::string witness;
};

/// Minimises <P, C> over all (m+n)! permutation matrices.
/// Throws Error(size_bound_exceeded) when |sigma| + |tau| > 8.
OracleResult brute_force_diagram(const PersistenceDiagram& sigma, const PersistenceDiagram& tau,
                                 double p, Execution exec = Execution::parallel);

/// Unit masses with at most 4 atoms per side: permutation enumeration.
/// Otherwise: enumeration of every basic feasible solution of the
/// per-point-copy transportation polytope with exact rational flows.
/// Throws Error(size_bound_exceeded) beyond the limits above.
OracleResult brute_force_wb(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
                            Execution exec = Execution::parallel);

}  // namespace wbp
