#include <gtest/gtest.h>

#include <cmath>

#include "instances.hpp"
#include "wbp/error.hpp"
#include "wbp/oracle.hpp"
#include "wbp/solver.hpp"

using namespace wbp;

namespace {

PairPtr hp() { return fixtures::half_plane_ptr(); }
DiscreteMeasure delta(const Point& x, double m = 1.0) { return DiscreteMeasure(hp(), {{x, m}}); }

}  // namespace

TEST(Solver, Costs) {
  const auto pair = MetricPair::half_plane();
  EXPECT_NEAR(cost_c(pair, {0, 1}, {0, 5}, 2), 16.0, 1e-14);
  EXPECT_NEAR(cost_ctilde(pair, {0, 1}, {0, 5}, 2), 13.0, 1e-14);
  EXPECT_EQ(cost_c(pair, {0, 2}, {0, 2}, 2), 0.0);
  EXPECT_EQ(cost_ctilde(pair, {0, 2}, {0, 2}, 2), 0.0);
  EXPECT_EQ(cost_ctilde(pair, {1, 1}, {2, 2}, 2), 0.0);
  EXPECT_TRUE(in_S(pair, {0, 1}, {0, 3}, 2, 0.0));
  EXPECT_FALSE(in_S(pair, {0, 1}, {0, 5}, 2, 1e-9));
  EXPECT_TRUE(in_S(pair, {0, 2}, {0, 2}, 2, 0.0));
}

TEST(Solver, AugmentedProblem) {
  const auto prob = build_augmented_problem(delta({0, 1}), delta({0, 3}), 2);
  ASSERT_EQ(prob.rows(), 2u);
  ASSERT_EQ(prob.cols(), 2u);
  EXPECT_NEAR(prob.at(0, 0), 4.0, 1e-14);
  EXPECT_NEAR(prob.at(0, 1), 0.5, 1e-14);
  EXPECT_NEAR(prob.at(1, 0), 4.5, 1e-14);
  EXPECT_EQ(prob.at(1, 1), 0.0);
  EXPECT_EQ(prob.supplies(), (std::vector<double>{1, 1}));
  EXPECT_EQ(prob.demands(), (std::vector<double>{1, 1}));

  const auto zero = DiscreteMeasure::zero(hp());
  EXPECT_EQ(solve(zero, zero, 2).cost, 0.0);
  EXPECT_NEAR(solve(delta({0, 2}, 2.0), zero, 2).cost, 4.0, 1e-13);
}

TEST(Solver, DirectEdge) {
  const auto s = solve(delta({0, 1}), delta({0, 3}), 2);
  EXPECT_NEAR(s.wb, 2.0, 1e-12);
  ASSERT_EQ(s.plan.size(), 1u);
  EXPECT_EQ(s.plan.entries()[0], (PlanEntry{{0, 1}, {0, 3}, 1.0}));
}

TEST(Solver, BoundaryRoute) {
  const auto s = solve(delta({0, 1}), delta({0, 5}), 2);
  EXPECT_NEAR(s.wb, std::sqrt(13.0), 1e-12);
  ASSERT_EQ(s.plan.size(), 2u);
  for (const auto& e : s.plan.entries()) {
    EXPECT_TRUE(s.plan.pair().in_boundary(e.source) || s.plan.pair().in_boundary(e.target));
  }
}

TEST(Solver, IdentityPlan) {
  fixtures::InstanceGenerator gen(7);
  const auto mu = gen.measure(hp(), 5, 1);
  const auto s = solve(mu, mu, 2);
  EXPECT_EQ(s.wb, 0.0);
  for (const auto& e : s.plan.entries()) EXPECT_EQ(e.source, e.target);
  EXPECT_NEAR(s.plan.size(), mu.canonical().size(), 0);
}

TEST(Solver, PartialMatch) {
  const auto s = solve(delta({0, 2}, 2.0), delta({0, 2}, 1.0), 2);
  EXPECT_NEAR(s.wb, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(solve_exact_cost(delta({0, 2}, 2.0), delta({0, 2}, 1.0), 2), Rational(2));
}

TEST(Solver, Diagrams) {
  const PersistenceDiagram sigma({Point{0, 4}});
  const PersistenceDiagram tau({Point{1, 5}});
  const auto m = diagram_distance(sigma, tau, 2);
  EXPECT_NEAR(m.dp, std::sqrt(2.0), 1e-12);
  ASSERT_EQ(m.matched.size(), 1u);
  EXPECT_TRUE(m.deletions.empty());
  EXPECT_EQ(diagram_distance(sigma, sigma, 2).dp, 0.0);
  const auto del = diagram_distance(sigma, PersistenceDiagram(std::vector<Point>{}), 2);
  EXPECT_NEAR(del.dp, 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(del.deletions.size(), 1u);
}

TEST(Solver, DiagramMultiplicity) {
  const PersistenceDiagram sigma({Point{0, 4}, Point{0, 4}, Point{1, 2}});
  const PersistenceDiagram tau({Point{0, 4.5}});
  const auto m = diagram_distance(sigma, tau, 1);
  EXPECT_EQ(m.matched.size() + m.deletions.size(), 3u);
  EXPECT_EQ(m.matched.size() + m.insertions.size(), 1u);
  EXPECT_NEAR(std::pow(m.dp, 1.0), brute_force_diagram(sigma, tau, 1).value, 1e-12);
}

TEST(Solver, Errors) {
  EXPECT_THROW(solve(delta({0, 1}), delta({0, 3}), 0.5), Error);
  const auto box = make_pair_ptr(MetricPair::euclidean_box({0, 0}, {4, 4}));
  try {
    solve(delta({0, 1}), DiscreteMeasure(box, {{{1, 1}, 1.0}}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::pair_mismatch);
  }
  EXPECT_THROW(solve_exact_cost(delta({0, 1}), delta({0, 3}), 1), Error);
}

TEST(Solver, DualsAreFeasibleAndTight) {
  fixtures::InstanceGenerator gen(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto pair = gen.euclidean_pair();
    const auto mu = gen.measure(pair, 6);
    const auto nu = gen.measure(pair, 6);
    const double p = rep % 2 == 0 ? 2.0 : 1.5;
    const auto s = solve(mu, nu, p);
    double dual = 0.0;
    const auto cmu = mu.canonical();
    const auto cnu = nu.canonical();
    for (const auto& a : cmu.atoms()) dual += a.mass * s.duals.phi.at(a.point);
    for (const auto& b : cnu.atoms()) dual += b.mass * s.duals.psi.at(b.point);
    EXPECT_NEAR(dual, s.cost, 1e-9 * (1.0 + s.cost));
    for (const auto& [x, f] : s.duals.phi) {
      EXPECT_LE(f, std::pow(pair->dist_to_boundary(x), p) + 1e-9);
      for (const auto& [y, g] : s.duals.psi) EXPECT_LE(f + g, cost_c(*pair, x, y, p) + 1e-9);
    }
  }
}

TEST(Solver, ExactModeMatchesFloatingPoint) {
  fixtures::InstanceGenerator gen(3);
  for (int rep = 0; rep < 30; ++rep) {
    const auto pair = gen.euclidean_pair();
    const auto mu = gen.measure(pair, 5);
    const auto nu = gen.measure(pair, 5);
    const double exact = to_double(solve_exact_cost(mu, nu, 2));
    EXPECT_NEAR(solve(mu, nu, 2).cost, exact, 1e-10 * (1.0 + exact));
  }
}

TEST(Solver, FinitePair) {
  const auto pair = make_pair_ptr(MetricPair::finite(
      {{0, 2, 3, 4}, {2, 0, 1, 2}, {3, 1, 0, 1.5}, {4, 2, 1.5, 0}}, {0}));
  const DiscreteMeasure mu(pair, {{Point::node(1), 1.0}, {Point::node(2), 2.0}});
  const DiscreteMeasure nu(pair, {{Point::node(3), 1.5}});
  const auto s = solve(mu, nu, 1);
  EXPECT_NEAR(s.cost, brute_force_wb(mu, nu, 1).value, 1e-12);
  EXPECT_NEAR(to_double(solve_exact_cost(mu, nu, 1)), s.cost, 1e-12);
}
