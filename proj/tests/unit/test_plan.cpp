#include <gtest/gtest.h>

#include "wbp/error.hpp"
#include "wbp/plan.hpp"

using namespace wbp;

namespace {

PairPtr hp() { return make_pair_ptr(MetricPair::half_plane()); }

const Point x{0, 1};
const Point y{0, 3};
const Point z{1, 4};
const Point a{1, 1};

}  // namespace

TEST(Plan, Cost) {
  const auto pair = hp();
  EXPECT_DOUBLE_EQ(cost(TransportPlan(pair, {{x, y, 1.0}}), 2), 4.0);
  EXPECT_EQ(cost(TransportPlan(pair, {}), 2), 0.0);
  EXPECT_NEAR(cost(TransportPlan(pair, {{{0, 2}, a, 2.0}}), 2), 4.0, 1e-14);
}

TEST(Plan, RejectsBoundaryPairsAndBadMass) {
  const auto pair = hp();
  EXPECT_THROW(TransportPlan(pair, {{a, Point{2, 2}, 1.0}}), Error);
  EXPECT_THROW(TransportPlan(pair, {{x, y, -1.0}}), Error);
  EXPECT_THROW(TransportPlan(pair, {{x, y, 0.0}}), Error);
}

TEST(Plan, Marginals) {
  const auto pair = hp();
  {
    auto [m1, m2] = marginals(TransportPlan(pair, {{{0, 2}, a, 1.0}}));
    EXPECT_EQ(m1.size(), 1u);
    EXPECT_TRUE(m2.empty());
  }
  {
    auto [m1, m2] = marginals(TransportPlan(pair, {{x, y, 1.0}}));
    EXPECT_EQ(m1.atoms()[0].point, x);
    EXPECT_EQ(m2.atoms()[0].point, y);
  }
  {
    auto [m1, m2] = marginals(TransportPlan(pair, {{a, y, 2.0}}));
    EXPECT_TRUE(m1.empty());
    EXPECT_EQ(m2.atoms()[0].mass, 2.0);
  }
}

TEST(Plan, Decompose) {
  const auto pair = hp();
  const auto parts = decompose(TransportPlan(pair, {{x, y, 1.0}, {z, Point{2.5, 2.5}, 1.0}, {a, y, 1.0}}));
  EXPECT_EQ(parts.interior.size(), 1u);
  EXPECT_EQ(parts.to_boundary.size(), 1u);
  EXPECT_EQ(parts.from_boundary.size(), 1u);
  const auto all = decompose(TransportPlan(pair, {{x, y, 1.0}}));
  EXPECT_EQ(all.interior.size(), 1u);
  EXPECT_TRUE(all.to_boundary.empty());
  EXPECT_TRUE(all.from_boundary.empty());
}

TEST(Plan, GlueChain) {
  const auto pair = hp();
  const auto g = glue(TransportPlan(pair, {{x, y, 1.0}}), TransportPlan(pair, {{y, z, 1.0}}));
  ASSERT_EQ(g.triples.size(), 1u);
  EXPECT_EQ(g.triples[0].first, x);
  EXPECT_EQ(g.triples[0].middle, y);
  EXPECT_EQ(g.triples[0].last, z);
  EXPECT_EQ(g.triples[0].mass, 1.0);
  EXPECT_TRUE(g.defect12.empty());
  EXPECT_TRUE(g.defect23.empty());
  const auto composed = compose(g);
  ASSERT_EQ(composed.size(), 1u);
  EXPECT_EQ(composed.entries()[0], (PlanEntry{x, z, 1.0}));
}

TEST(Plan, GlueBoundaryBranches) {
  const auto pair = hp();
  {
    const auto g = glue(TransportPlan(pair, {{x, a, 1.0}}), TransportPlan(pair, {}));
    ASSERT_EQ(g.triples.size(), 1u);
    EXPECT_EQ(g.triples[0].first, x);
    EXPECT_EQ(g.triples[0].middle, a);
    EXPECT_EQ(g.triples[0].last, a);
    ASSERT_EQ(g.defect23.size(), 1u);
    EXPECT_EQ(g.defect23[0].point, a);
    EXPECT_TRUE(g.defect12.empty());
    const auto composed = compose(g);
    ASSERT_EQ(composed.size(), 1u);
    EXPECT_EQ(composed.entries()[0], (PlanEntry{x, a, 1.0}));
  }
  {
    const auto g = glue(TransportPlan(pair, {}), TransportPlan(pair, {{a, z, 1.0}}));
    ASSERT_EQ(g.triples.size(), 1u);
    EXPECT_EQ(g.triples[0].first, a);
    EXPECT_EQ(g.triples[0].middle, a);
    EXPECT_EQ(g.triples[0].last, z);
    ASSERT_EQ(g.defect12.size(), 1u);
    EXPECT_TRUE(g.defect23.empty());
  }
}

TEST(Plan, ComposeDropsBoundaryPairs) {
  const auto pair = hp();
  GluedPlan g{pair, {{a, a, a, 1.0}}, {}, {}};
  EXPECT_TRUE(compose(g).empty());
}

TEST(Plan, GlueProjectionsRecoverInputs) {
  const auto pair = hp();
  const Point w{2, 3.5};
  const TransportPlan p12(pair, {{x, y, 1.0}, {z, y, 0.5}, {w, Point{2.75, 2.75}, 1.0}});
  const TransportPlan p23(pair, {{y, z, 0.75}, {y, Point{1.5, 1.5}, 0.75}, {Point{3, 3}, w, 2.0}});
  const auto g = glue(p12, p23);
  EXPECT_TRUE(same_coupling(project12(g), with_defects(p12.entries(), g.defect12), 1e-12));
  EXPECT_TRUE(same_coupling(project23(g), with_defects(p23.entries(), g.defect23), 1e-12));
}

TEST(Plan, GlueMarginalMismatch) {
  const auto pair = hp();
  try {
    glue(TransportPlan(pair, {{x, y, 1.0}}), TransportPlan(pair, {{y, z, 2.0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::marginal_mismatch);
  }
}
