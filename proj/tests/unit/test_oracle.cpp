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

TEST(Oracle, DiagramExamples) {
  const PersistenceDiagram sigma({Point{0, 4}});
  const auto direct = brute_force_diagram(sigma, PersistenceDiagram({Point{1, 5}}), 2);
  EXPECT_NEAR(direct.value, 2.0, 1e-12);
  ASSERT_TRUE(direct.exact_value.has_value());
  EXPECT_EQ(*direct.exact_value, Rational(2));
  EXPECT_EQ(brute_force_diagram(sigma, sigma, 2).value, 0.0);
  const auto deletion = brute_force_diagram(sigma, PersistenceDiagram(std::vector<Point>{}), 2);
  EXPECT_NEAR(deletion.value, 8.0, 1e-12);
}

TEST(Oracle, MeasureExamples) {
  EXPECT_NEAR(brute_force_wb(delta({0, 1}), delta({0, 3}), 2).value, 4.0, 1e-12);
  const auto mu = DiscreteMeasure(hp(), {{{0, 1}, 0.4}, {{1, 3}, 2.5}});
  EXPECT_EQ(brute_force_wb(mu, mu, 2).value, 0.0);
  const auto partial = brute_force_wb(delta({0, 2}, 2.0), delta({0, 2}, 1.0), 2);
  EXPECT_NEAR(partial.value, 2.0, 1e-12);
  EXPECT_EQ(*partial.exact_value, Rational(2));
}

TEST(Oracle, SizeBounds) {
  std::vector<Point> many(5, Point{0, 1});
  try {
    brute_force_diagram(PersistenceDiagram(many), PersistenceDiagram(many), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::size_bound_exceeded);
  }
  fixtures::InstanceGenerator gen(1);
  const auto big = gen.measure(hp(), 12, 12);
  EXPECT_THROW(brute_force_wb(big, big, 2), Error);
}

TEST(Oracle, UnitMassAgreesWithDiagramOracle) {
  fixtures::InstanceGenerator gen(77);
  for (int rep = 0; rep < 40; ++rep) {
    const auto sigma = gen.diagram(4);
    const auto tau = gen.diagram(4);
    const double p = rep % 2 == 0 ? 1.0 : 2.0;
    EXPECT_NEAR(brute_force_wb(diagram_to_measure(sigma), diagram_to_measure(tau), p).value,
                brute_force_diagram(sigma, tau, p).value, 1e-12);
  }
}

TEST(Oracle, VertexRouteAgreesWithSolver) {
  fixtures::InstanceGenerator gen(123);
  for (int rep = 0; rep < 40; ++rep) {
    const auto pair = gen.euclidean_pair();
    const auto mu = gen.measure(pair, 3);
    const auto nu = gen.measure(pair, 2);
    const double p = rep % 3 == 0 ? 1.0 : 2.0;
    const auto oracle = brute_force_wb(mu, nu, p);
    EXPECT_NEAR(solve(mu, nu, p).cost, oracle.value, 1e-9 * (1.0 + oracle.value));
    if (p == 2.0) {
      ASSERT_TRUE(oracle.exact_value.has_value());
      EXPECT_EQ(solve_exact_cost(mu, nu, 2), *oracle.exact_value);
    }
  }
}

TEST(Oracle, SerialMatchesParallel) {
  fixtures::InstanceGenerator gen(8);
  for (int rep = 0; rep < 10; ++rep) {
    const auto sigma = gen.diagram(4);
    const auto tau = gen.diagram(4);
    const auto serial = brute_force_diagram(sigma, tau, 1.5, Execution::serial);
    const auto parallel = brute_force_diagram(sigma, tau, 1.5, Execution::parallel);
    EXPECT_EQ(serial.value, parallel.value);
    EXPECT_EQ(serial.assignment, parallel.assignment);
  }
}

TEST(Oracle, FinitePairsAgreeWithSolver) {
  fixtures::InstanceGenerator gen(99);
  for (int rep = 0; rep < 30; ++rep) {
    // Euclidean distances between random planar points form a valid table.
    const std::size_t nodes = gen.index(3, 6);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t k = 0; k < nodes; ++k) xy.emplace_back(gen.uniform(0, 4), gen.uniform(0, 4));
    std::vector<std::vector<double>> dist(nodes, std::vector<double>(nodes, 0.0));
    for (std::size_t a = 0; a < nodes; ++a) {
      for (std::size_t b = 0; b < nodes; ++b) {
        dist[a][b] = std::hypot(xy[a].first - xy[b].first, xy[a].second - xy[b].second);
      }
    }
    const auto pair = make_pair_ptr(MetricPair::finite(dist, {0}));
    auto random_measure = [&](std::size_t limit) {
      std::vector<Atom> atoms;
      for (std::size_t k = 1; k < nodes && atoms.size() < limit; ++k) {
        if (gen.coin()) atoms.push_back({Point::node(k), gen.mass()});
      }
      return DiscreteMeasure(pair, std::move(atoms));
    };
    const auto mu = random_measure(3);
    const auto nu = random_measure(2);
    const double p = rep % 2 == 0 ? 1.0 : 2.0;
    const double oracle = brute_force_wb(mu, nu, p).value;
    EXPECT_NEAR(solve(mu, nu, p).cost, oracle, 1e-9 * (1.0 + oracle));
  }
}

TEST(Oracle, LatticeTiesAgreeExactly) {
  fixtures::InstanceGenerator gen(5);
  for (int rep = 0; rep < 40; ++rep) {
    auto lattice = [&](std::size_t count) {
      std::vector<Atom> atoms;
      for (std::size_t k = 0; k < count; ++k) {
        const double b = static_cast<double>(gen.index(0, 2));
        atoms.push_back({Point{b, b + static_cast<double>(gen.index(1, 2))}, 0.5 * static_cast<double>(gen.index(1, 3))});
      }
      return DiscreteMeasure(hp(), std::move(atoms));
    };
    const auto mu = lattice(gen.index(0, 3));
    const auto nu = lattice(gen.index(0, 2));
    const auto oracle = brute_force_wb(mu, nu, 2);
    ASSERT_TRUE(oracle.exact_value.has_value());
    EXPECT_EQ(solve_exact_cost(mu, nu, 2), *oracle.exact_value);
    EXPECT_NEAR(solve(mu, nu, 2).cost, oracle.value, 1e-12);
  }
}
