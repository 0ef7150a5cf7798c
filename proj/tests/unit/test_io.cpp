#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "instances.hpp"
#include "wbp/error.hpp"
#include "wbp/io.hpp"

using namespace wbp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "wbp_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Io, MeasureRoundTrip) {
  fixtures::InstanceGenerator gen(2);
  for (const auto& pair : {fixtures::half_plane_ptr(), fixtures::box_ptr()}) {
    const auto mu = gen.measure(pair, 6, 1);
    const auto path = scratch("mu.json");
    io::write_json_file(path, io::to_json(mu));
    const auto back = io::load_measure(path);
    EXPECT_TRUE(back.pair() == mu.pair());
    ASSERT_EQ(back.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_EQ(back.atoms()[i], mu.atoms()[i]);
  }
}

TEST(Io, PlanAndDualsRoundTrip) {
  fixtures::InstanceGenerator gen(3);
  const auto mu = gen.measure(fixtures::half_plane_ptr(), 4, 2);
  const auto nu = gen.measure(fixtures::half_plane_ptr(), 4, 2);
  const auto s = solve(mu, nu, 2);
  io::write_json_file(scratch("plan.json"), io::to_json(s.plan));
  io::write_json_file(scratch("duals.json"), io::to_json(s.duals));
  const auto plan = io::load_plan(scratch("plan.json"), mu.pair_ptr());
  EXPECT_EQ(cost(plan, 2), s.cost);
  EXPECT_EQ(plan.exponent(), 2.0);
  const auto duals = io::load_duals(scratch("duals.json"));
  EXPECT_EQ(duals.phi, s.duals.phi);
  EXPECT_EQ(duals.psi, s.duals.psi);
}

TEST(Io, DefaultsAndReferences) {
  write_text(scratch("bare.json"), R"({"atoms":[{"point":[0,2],"mass":1.5}]})");
  EXPECT_EQ(io::load_measure(scratch("bare.json")).pair().kind(), PairKind::half_plane);
  write_text(scratch("graph.pair"), R"({"kind":"finite","dist":[[0,2],[2,0]],"A":[0]})");
  write_text(scratch("graph.json"), R"({"pair":"graph.pair","atoms":[{"point":1,"mass":1}]})");
  const auto mu = io::load_measure(scratch("graph.json"));
  EXPECT_EQ(mu.pair().kind(), PairKind::finite);
  EXPECT_EQ(mu.atoms()[0].point, Point::node(1));
  write_text(scratch("dgm.json"), R"({"points":[[0,4],[1,5]]})");
  EXPECT_EQ(io::load_diagram(scratch("dgm.json")).size(), 2u);
}

TEST(Io, ErrorsNameFileAndPosition) {
  write_text(scratch("broken.json"), "{\"atoms\": [ {\"point\": [0, 2], }");
  try {
    io::load_measure(scratch("broken.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    EXPECT_NE(std::string(e.what()).find("broken.json"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  write_text(scratch("typed.json"), R"({"atoms":[{"point":[0,2],"mass":"one"}]})");
  try {
    io::load_measure(scratch("typed.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/atoms/0/mass"), std::string::npos);
  }
  write_text(scratch("diag.json"), R"({"atoms":[{"point":[1,1],"mass":1}]})");
  try {
    io::load_measure(scratch("diag.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::atom_on_boundary);
    EXPECT_NE(std::string(e.what()).find("diag.json"), std::string::npos);
  }
  write_text(scratch("neg.json"), R"({"atoms":[{"point":[0,1],"mass":-1}]})");
  EXPECT_EQ(code_of([&] { io::load_measure(scratch("neg.json")); }), ErrorCode::non_positive_mass);
  EXPECT_EQ(code_of([&] { io::load_measure(scratch("missing.json")); }), ErrorCode::parse_error);
}

TEST(Io, PlanPairMismatch) {
  const TransportPlan plan(fixtures::half_plane_ptr(), {{{0, 1}, {0, 3}, 1.0}});
  io::write_json_file(scratch("hp_plan.json"), io::to_json(plan));
  EXPECT_EQ(code_of([&] { io::load_plan(scratch("hp_plan.json"), fixtures::box_ptr()); }),
            ErrorCode::pair_mismatch);
}
