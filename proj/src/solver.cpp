#include "wbp/solver.hpp"

#include <algorithm>
#include <cmath>

#include "wbp/detail/transport_simplex.hpp"
#include "wbp/error.hpp"

namespace wbp {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::invalid_argument, "p must be finite and >= 1");
  }
}

void require_same_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!same_pair(mu.pair_ptr(), nu.pair_ptr())) {
    throw Error(ErrorCode::pair_mismatch, "measures live on different metric pairs");
  }
}

// The corner cell has unbounded capacity in the partial problem. Padding both
// boundary nodes by the same positive amount keeps the optimal value and
// forces the corner into every basis, which pins v[boundary] = u[boundary] = 0.
template <class Scalar>
Scalar corner_padding(const Scalar& mass_mu, const Scalar& mass_nu) {
  return Scalar(1) + mass_mu + mass_nu;
}

}  // namespace

double cost_c(const MetricPair& pair, const Point& x, const Point& y, double p) {
  require_exponent(p);
  return std::pow(pair.distance(x, y), p);
}

double cost_ctilde(const MetricPair& pair, const Point& x, const Point& y, double p) {
  require_exponent(p);
  const double direct = std::pow(pair.distance(x, y), p);
  const double via_boundary =
      std::pow(pair.dist_to_boundary(x), p) + std::pow(pair.dist_to_boundary(y), p);
  return std::min(direct, via_boundary);
}

bool in_S(const MetricPair& pair, const Point& x, const Point& y, double p, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "tolerance must be non-negative");
  return cost_c(pair, x, y, p) - cost_ctilde(pair, x, y, p) <= tol;
}

std::vector<double> AugmentedProblem::supplies() const {
  std::vector<double> s;
  s.reserve(rows());
  for (const Atom& a : sources) s.push_back(a.mass);
  s.push_back(boundary_supply);
  return s;
}

std::vector<double> AugmentedProblem::demands() const {
  std::vector<double> d;
  d.reserve(cols());
  for (const Atom& a : sinks) d.push_back(a.mass);
  d.push_back(boundary_demand);
  return d;
}

AugmentedProblem build_augmented_problem(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         double p) {
  require_exponent(p);
  require_same_pair(mu, nu);
  const MetricPair& pair = mu.pair();

  AugmentedProblem problem;
  problem.pair = mu.pair_ptr();
  problem.p = p;
  const DiscreteMeasure mu_c = mu.canonical();
  const DiscreteMeasure nu_c = nu.canonical();
  problem.sources.assign(mu_c.atoms().begin(), mu_c.atoms().end());
  problem.sinks.assign(nu_c.atoms().begin(), nu_c.atoms().end());
  problem.boundary_supply = nu_c.total_mass();
  problem.boundary_demand = mu_c.total_mass();

  const std::size_t m = problem.sources.size();
  const std::size_t n = problem.sinks.size();
  problem.cost.assign((m + 1) * (n + 1), 0.0);
  std::vector<double> sink_gap(n);
  for (std::size_t j = 0; j < n; ++j) {
    sink_gap[j] = std::pow(pair.dist_to_boundary(problem.sinks[j].point), p);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Point& x = problem.sources[i].point;
    for (std::size_t j = 0; j < n; ++j) {
      problem.cost[i * (n + 1) + j] = std::pow(pair.distance(x, problem.sinks[j].point), p);
    }
    problem.cost[i * (n + 1) + n] = std::pow(pair.dist_to_boundary(x), p);
  }
  for (std::size_t j = 0; j < n; ++j) problem.cost[m * (n + 1) + j] = sink_gap[j];
  return problem;
}

Solution solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  AugmentedProblem problem = build_augmented_problem(mu, nu, p);
  const MetricPair& pair = *problem.pair;
  const std::size_t m = problem.sources.size();
  const std::size_t n = problem.sinks.size();

  if (problem.sources == problem.sinks) {
    // Identity coupling; zero potentials certify it.
    std::vector<PlanEntry> entries;
    DualPotentials duals;
    for (const Atom& a : problem.sources) {
      entries.push_back({a.point, a.point, a.mass});
      duals.phi[a.point] = 0.0;
      duals.psi[a.point] = 0.0;
    }
    return {0.0, 0.0, TransportPlan(problem.pair, std::move(entries), p), std::move(duals), false, 0};
  }

  std::vector<double> supply = problem.supplies();
  std::vector<double> demand = problem.demands();
  const double padding = corner_padding(problem.boundary_demand, problem.boundary_supply);
  supply.back() += padding;
  demand.back() += padding;

  const double max_cost =
      problem.cost.empty() ? 0.0 : *std::max_element(problem.cost.begin(), problem.cost.end());
  const double mass_scale = 1.0 + problem.boundary_supply + problem.boundary_demand;
  detail::TransportSimplex<double> simplex(problem.rows(), problem.cols(), supply, demand,
                                           problem.cost, m, 1e-12 * (1.0 + max_cost),
                                           1e-13 * mass_scale);
  const auto outcome = simplex.run();
  const double mass_tol = 1e-13 * mass_scale;

  std::vector<PlanEntry> entries;
  for (std::size_t i = 0; i < m; ++i) {
    const Point& x = problem.sources[i].point;
    for (std::size_t j = 0; j < n; ++j) {
      const double f = outcome.flow_at(i, j);
      if (f > mass_tol) entries.push_back({x, problem.sinks[j].point, f});
    }
    const double f = outcome.flow_at(i, n);
    if (f > mass_tol) entries.push_back({x, pair.project_to_boundary(x), f});
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double f = outcome.flow_at(m, j);
    const Point& y = problem.sinks[j].point;
    if (f > mass_tol) entries.push_back({pair.project_to_boundary(y), y, f});
  }

  DualPotentials duals;
  for (std::size_t i = 0; i < m; ++i) duals.phi[problem.sources[i].point] = outcome.u[i];
  for (std::size_t j = 0; j < n; ++j) duals.psi[problem.sinks[j].point] = outcome.v[j];

  TransportPlan plan(problem.pair, std::move(entries), p);
  const double total = std::max(0.0, cost(plan, p));
  return {std::pow(total, 1.0 / p), total, std::move(plan), std::move(duals),
          outcome.alternative_optimum, outcome.pivots};
}

double wb_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  return solve(mu, nu, p).wb;
}

Rational solve_exact_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int p) {
  require_same_pair(mu, nu);
  if (p < 1) throw Error(ErrorCode::invalid_argument, "p must be >= 1");
  const MetricPair& pair = mu.pair();
  const DiscreteMeasure mu_c = mu.canonical();
  const DiscreteMeasure nu_c = nu.canonical();
  const std::size_t m = mu_c.size();
  const std::size_t n = nu_c.size();

  auto need = [&](std::optional<Rational> value) {
    if (!value) {
      throw Error(ErrorCode::invalid_argument,
                  "exact costs need an even p on Euclidean pairs (got p = " + std::to_string(p) + ")");
    }
    return std::move(*value);
  };

  std::vector<Rational> cost((m + 1) * (n + 1), Rational(0));
  std::vector<Rational> supply;
  std::vector<Rational> demand;
  Rational mass_mu = 0;
  Rational mass_nu = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Atom& a = mu_c.atoms()[i];
    supply.push_back(to_rational(a.mass));
    mass_mu += supply.back();
    for (std::size_t j = 0; j < n; ++j) {
      cost[i * (n + 1) + j] = need(pair.distance_pow_exact(a.point, nu_c.atoms()[j].point, p));
    }
    cost[i * (n + 1) + n] = need(pair.boundary_distance_pow_exact(a.point, p));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const Atom& b = nu_c.atoms()[j];
    demand.push_back(to_rational(b.mass));
    mass_nu += demand.back();
    cost[m * (n + 1) + j] = need(pair.boundary_distance_pow_exact(b.point, p));
  }
  const Rational padding = corner_padding(mass_mu, mass_nu);
  supply.push_back(mass_nu + padding);
  demand.push_back(mass_mu + padding);

  detail::TransportSimplex<Rational> simplex(m + 1, n + 1, supply, demand, cost, m, Rational(0),
                                             Rational(0));
  return simplex.run().objective;
}

DiagramMatching diagram_distance(const PersistenceDiagram& sigma, const PersistenceDiagram& tau,
                                 double p) {
  const DiscreteMeasure mu = diagram_to_measure(sigma);
  const DiscreteMeasure nu = diagram_to_measure(tau);
  Solution solution = solve(mu, nu, p);

  DiagramMatching out{solution.wb, solution.plan, {}, {}, {}};
  const MetricPair& pair = mu.pair();
  for (const PlanEntry& e : solution.plan.entries()) {
    const double rounded = std::round(e.mass);
    if (std::abs(e.mass - rounded) > 1e-9) {
      throw Error(ErrorCode::invalid_argument, "diagram matching is not integral");
    }
    const auto copies = static_cast<std::size_t>(rounded);
    const bool source_on_a = pair.in_boundary(e.source);
    const bool target_on_a = pair.in_boundary(e.target);
    for (std::size_t k = 0; k < copies; ++k) {
      if (!source_on_a && !target_on_a) {
        out.matched.emplace_back(e.source, e.target);
      } else if (target_on_a) {
        out.deletions.push_back(e.source);
      } else {
        out.insertions.push_back(e.target);
      }
    }
  }
  return out;
}

}  // namespace wbp
