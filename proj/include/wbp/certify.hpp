#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wbp/parallel.hpp"
#include "wbp/solver.hpp"

namespace wbp {

/// Outcome of a single optimality check. A violation counts when it exceeds
/// tol * (1 + magnitude) of the quantity being compared.
struct CheckResult {
  bool passed = true;
  double worst_violation = 0.0;
};

/// Every entry with both endpoints in Omega lies in S.
CheckResult check_concentrated_on_S(const TransportPlan& plan, double p, double tol);

/// Subsets of support pairs are enumerated exhaustively while the number of
/// subsets per cycle length stays within this budget; beyond it that many
/// subsets are sampled with a fixed seed.
inline constexpr std::size_t kMonotonicitySubsetBudget = 100'000;

struct MonotonicityReport {
  bool passed = true;
  double worst_violation = 0.0;
  /// (k, passed) for every cycle length k in [2, k_max].
  std::vector<std::pair<std::size_t, bool>> by_length;
  std::size_t subsets_checked = 0;
  bool exhaustive = true;
};

/// c~-cyclical monotonicity of supp(plan) together with A x A.
///
/// A x A is represented by one virtual pair whose c~ interactions use the
/// boundary distances (c~(x, A) = d(x, A)^p, c~(A, A) = 0). For every subset
/// of at most k_max pairs and every permutation, the re-paired c~ cost must
/// not undercut the cost the plan actually pays on those pairs. Because plan
/// entries pay the direct cost c, a lone entry outside S already fails
/// against the virtual pair at k = 2.
MonotonicityReport check_cyclical_monotonicity(const TransportPlan& plan, double p,
                                               std::size_t k_max, double tol,
                                               Execution exec = Execution::parallel,
                                               std::uint64_t seed = 0x5eed);

/// Feasibility of the potentials on all atom pairs and against A, and
/// complementary slackness on every entry with positive mass. Throws
/// Error(missing_potential) when an Omega endpoint has no potential.
CheckResult check_potentials(const TransportPlan& plan, const DualPotentials& duals, double p,
                             double tol);

/// Mass sent to A travels to a nearest point of A: d(x, y) = d(x, A) on
/// Omega -> A entries and d(x, y) = d(y, A) on A -> Omega entries.
CheckResult check_boundary_shipping(const TransportPlan& plan, double tol);

struct CertifyTolerances {
  double support = 1e-8;
  double monotonicity = 1e-8;
  double potentials = 1e-9;
  double boundary = 1e-9;
  double cost = 1e-9;
  std::size_t k_max = 4;
};

struct CertificateReport {
  CheckResult concentrated_on_S;
  MonotonicityReport cyclically_monotone;
  /// Empty when no potentials were supplied.
  std::optional<CheckResult> potentials;
  CheckResult boundary_shipping;
  CheckResult matches_resolve;
  double plan_cost = 0.0;
  double optimal_cost = 0.0;
  double worst_violation = 0.0;

  bool passed() const;
};

/// Runs every check plus an independent re-solve of (mu, nu) and flags a
/// cost gap. Throws Error(inadmissible_plan) when the plan's marginals do
/// not reproduce mu and nu within kMarginalTolerance per atom.
CertificateReport certify_optimal(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const TransportPlan& plan, const DualPotentials* duals,
                                  double p, const CertifyTolerances& tol = {},
                                  Execution exec = Execution::parallel);

std::string describe(const CertificateReport& report);

}  // namespace wbp
