#include "wbp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wbp/error.hpp"

namespace wbp {

namespace {

double relative_violation(double excess, double magnitude, double tol, bool& passed) {
  if (excess > tol * (1.0 + std::abs(magnitude))) passed = false;
  return std::max(0.0, excess);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // Exact at every step: result * (n - k + i) is divisible by i.
    const std::uint64_t next = result * (n - k + i) / i;
    if (next < result) return UINT64_MAX;
    result = next;
  }
  return result;
}

// k-combination of {0..n-1} with the given lexicographic rank.
void unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k,
                        std::vector<std::size_t>& out) {
  out.resize(k);
  std::size_t next = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t c = next;; ++c) {
      const std::uint64_t count = binomial(n - 1 - c, k - 1 - a);
      if (rank < count) {
        out[a] = c;
        next = c + 1;
        break;
      }
      rank -= count;
    }
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void sample_combination(std::uint64_t key, std::size_t n, std::size_t k,
                        std::vector<std::size_t>& out) {
  out.clear();
  std::uint64_t state = key;
  while (out.size() < k) {
    state = splitmix64(state);
    const std::size_t c = static_cast<std::size_t>(state % n);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
}

struct SubsetOutcome {
  bool passed = true;
  double worst = 0.0;
};

SubsetOutcome check_subset(std::span<const std::size_t> subset, std::span<const double> paid,
                           std::span<const double> ctilde, std::size_t stride, double tol) {
  const std::size_t k = subset.size();
  double baseline = 0.0;
  for (std::size_t s : subset) baseline += paid[s];
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SubsetOutcome out;
  while (std::next_permutation(perm.begin(), perm.end())) {
    double repaired = 0.0;
    for (std::size_t a = 0; a < k; ++a) repaired += ctilde[subset[a] * stride + subset[perm[a]]];
    const double excess = baseline - repaired;
    out.worst = std::max(out.worst, relative_violation(excess, baseline, tol, out.passed));
  }
  return out;
}

}  // namespace

CheckResult check_concentrated_on_S(const TransportPlan& plan, double p, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "tolerance must be non-negative");
  CheckResult result;
  const MetricPair& pair = plan.pair();
  for (const PlanEntry& e : plan.entries()) {
    if (pair.in_boundary(e.source) || pair.in_boundary(e.target)) continue;
    const double c = cost_c(pair, e.source, e.target, p);
    const double excess = c - cost_ctilde(pair, e.source, e.target, p);
    result.worst_violation =
        std::max(result.worst_violation, relative_violation(excess, c, tol, result.passed));
  }
  return result;
}

MonotonicityReport check_cyclical_monotonicity(const TransportPlan& plan, double p,
                                               std::size_t k_max, double tol, Execution exec,
                                               std::uint64_t seed) {
  if (k_max < 2) throw Error(ErrorCode::invalid_argument, "k_max must be at least 2");
  if (k_max > 8) throw Error(ErrorCode::invalid_argument, "k_max above 8 is not supported");
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "tolerance must be non-negative");
  const MetricPair& pair = plan.pair();
  const auto entries = plan.entries();
  const std::size_t n = entries.size() + 1;  // last element is the virtual A x A pair
  const std::size_t virt = n - 1;

  std::vector<double> source_gap(n, 0.0);
  std::vector<double> target_gap(n, 0.0);
  std::vector<double> paid(n, 0.0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    source_gap[i] = std::pow(pair.dist_to_boundary(entries[i].source), p);
    target_gap[i] = std::pow(pair.dist_to_boundary(entries[i].target), p);
    paid[i] = cost_c(pair, entries[i].source, entries[i].target, p);
  }
  std::vector<double> ctilde(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == virt && j == virt) continue;
      if (i == virt) {
        ctilde[i * n + j] = target_gap[j];
      } else if (j == virt) {
        ctilde[i * n + j] = source_gap[i];
      } else {
        const double direct = std::pow(pair.distance(entries[i].source, entries[j].target), p);
        ctilde[i * n + j] = std::min(direct, source_gap[i] + target_gap[j]);
      }
    }
  }

  MonotonicityReport report;
  for (std::size_t k = 2; k <= k_max; ++k) {
    bool length_passed = true;
    if (k <= n) {
      const std::uint64_t total = binomial(n, k);
      const bool exhaustive = total <= kMonotonicitySubsetBudget;
      const std::uint64_t count = exhaustive ? total : kMonotonicitySubsetBudget;
      report.exhaustive = report.exhaustive && exhaustive;

      const std::size_t blocks = static_cast<std::size_t>(std::min<std::uint64_t>(count, 256));
      std::vector<SubsetOutcome> block_outcomes(blocks);
      for_each_index(exec, blocks, [&](std::size_t b) {
        const std::uint64_t begin = count * b / blocks;
        const std::uint64_t end = count * (b + 1) / blocks;
        std::vector<std::size_t> subset;
        SubsetOutcome acc;
        for (std::uint64_t r = begin; r < end; ++r) {
          if (exhaustive) {
            unrank_combination(r, n, k, subset);
          } else {
            sample_combination(seed ^ (static_cast<std::uint64_t>(k) << 48) ^ r, n, k, subset);
          }
          const SubsetOutcome o = check_subset(subset, paid, ctilde, n, tol);
          acc.passed = acc.passed && o.passed;
          acc.worst = std::max(acc.worst, o.worst);
        }
        block_outcomes[b] = acc;
      });
      for (const SubsetOutcome& o : block_outcomes) {
        length_passed = length_passed && o.passed;
        report.worst_violation = std::max(report.worst_violation, o.worst);
      }
      report.subsets_checked += count;
    }
    report.by_length.emplace_back(k, length_passed);
    report.passed = report.passed && length_passed;
  }
  return report;
}

CheckResult check_potentials(const TransportPlan& plan, const DualPotentials& duals, double p,
                             double tol) {
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "tolerance must be non-negative");
  const MetricPair& pair = plan.pair();
  auto lookup = [](const std::map<Point, double>& table, const Point& x, const char* which) {
    auto it = table.find(x);
    if (it == table.end()) {
      throw Error(ErrorCode::missing_potential,
                  std::string("no ") + which + " value for atom " + to_string(x));
    }
    return it->second;
  };

  std::map<Point, double> sources;
  std::map<Point, double> targets;
  for (const PlanEntry& e : plan.entries()) {
    if (!pair.in_boundary(e.source)) sources[e.source] = lookup(duals.phi, e.source, "phi");
    if (!pair.in_boundary(e.target)) targets[e.target] = lookup(duals.psi, e.target, "psi");
  }

  CheckResult result;
  auto record = [&](double excess, double magnitude) {
    result.worst_violation =
        std::max(result.worst_violation, relative_violation(excess, magnitude, tol, result.passed));
  };

  for (const auto& [x, phi] : sources) {
    const double gap = std::pow(pair.dist_to_boundary(x), p);
    record(phi - gap, gap);
    for (const auto& [y, psi] : targets) {
      const double c = cost_c(pair, x, y, p);
      record(phi + psi - c, c);
    }
  }
  for (const auto& [y, psi] : targets) {
    const double gap = std::pow(pair.dist_to_boundary(y), p);
    record(psi - gap, gap);
  }

  for (const PlanEntry& e : plan.entries()) {
    const double c = cost_c(pair, e.source, e.target, p);
    const double phi = pair.in_boundary(e.source) ? 0.0 : sources.at(e.source);
    const double psi = pair.in_boundary(e.target) ? 0.0 : targets.at(e.target);
    record(std::abs(c - phi - psi), c);
  }
  return result;
}

CheckResult check_boundary_shipping(const TransportPlan& plan, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "tolerance must be non-negative");
  const MetricPair& pair = plan.pair();
  CheckResult result;
  for (const PlanEntry& e : plan.entries()) {
    const bool source_on_a = pair.in_boundary(e.source);
    const bool target_on_a = pair.in_boundary(e.target);
    if (source_on_a == target_on_a) continue;
    const Point& interior = source_on_a ? e.target : e.source;
    const double gap = pair.dist_to_boundary(interior);
    const double excess = std::abs(pair.distance(e.source, e.target) - gap);
    result.worst_violation =
        std::max(result.worst_violation, relative_violation(excess, gap, tol, result.passed));
  }
  return result;
}

bool CertificateReport::passed() const {
  return concentrated_on_S.passed && cyclically_monotone.passed &&
         (!potentials || potentials->passed) && boundary_shipping.passed && matches_resolve.passed;
}

CertificateReport certify_optimal(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const TransportPlan& plan, const DualPotentials* duals,
                                  double p, const CertifyTolerances& tol, Execution exec) {
  if (!same_pair(mu.pair_ptr(), nu.pair_ptr()) || !same_pair(mu.pair_ptr(), plan.pair_ptr())) {
    throw Error(ErrorCode::pair_mismatch, "plan and measures live on different metric pairs");
  }
  const auto [first, second] = marginals(plan);
  if (!approx_equal(first, mu, kMarginalTolerance) || !approx_equal(second, nu, kMarginalTolerance)) {
    throw Error(ErrorCode::inadmissible_plan, "plan marginals do not reproduce the given measures");
  }

  CertificateReport report;
  report.concentrated_on_S = check_concentrated_on_S(plan, p, tol.support);
  report.cyclically_monotone =
      check_cyclical_monotonicity(plan, p, tol.k_max, tol.monotonicity, exec);
  if (duals != nullptr) report.potentials = check_potentials(plan, *duals, p, tol.potentials);
  report.boundary_shipping = check_boundary_shipping(plan, tol.boundary);

  report.plan_cost = cost(plan, p);
  report.optimal_cost = solve(mu, nu, p).cost;
  const double gap = std::abs(report.plan_cost - report.optimal_cost);
  report.matches_resolve.worst_violation =
      relative_violation(gap, report.optimal_cost, tol.cost, report.matches_resolve.passed);

  report.worst_violation = std::max({report.concentrated_on_S.worst_violation,
                                     report.cyclically_monotone.worst_violation,
                                     report.potentials ? report.potentials->worst_violation : 0.0,
                                     report.boundary_shipping.worst_violation,
                                     report.matches_resolve.worst_violation});
  return report;
}

std::string describe(const CertificateReport& report) {
  auto verdict = [](bool ok) { return ok ? "pass" : "FAIL"; };
  std::ostringstream out;
  out.precision(12);
  out << "concentrated on S:      " << verdict(report.concentrated_on_S.passed) << '\n';
  out << "cyclically monotone:    " << verdict(report.cyclically_monotone.passed);
  for (const auto& [k, ok] : report.cyclically_monotone.by_length) out << "  k=" << k << ':' << verdict(ok);
  out << (report.cyclically_monotone.exhaustive ? "  (exhaustive)" : "  (sampled)") << '\n';
  out << "potentials:             "
      << (report.potentials ? verdict(report.potentials->passed) : "skipped (no duals)") << '\n';
  out << "boundary shipping:      " << verdict(report.boundary_shipping.passed) << '\n';
  out << "cost vs re-solve:       " << verdict(report.matches_resolve.passed) << "  plan "
      << report.plan_cost << "  optimal " << report.optimal_cost << '\n';
  out << "worst violation:        " << report.worst_violation << '\n';
  out << "certificate:            " << verdict(report.passed()) << '\n';
  return out.str();
}

}  // namespace wbp
