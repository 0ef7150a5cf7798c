#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("wbp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write("a.measure", R"({"pair":{"kind":"half_plane"},"atoms":[{"point":[0,1],"mass":1}]})");
    write("b.measure", R"({"atoms":[{"point":[0,3],"mass":1}]})");
    write("c.measure", R"({"atoms":[{"point":[0,2],"mass":1}]})");
    write("far.measure", R"({"atoms":[{"point":[0,5],"mass":1}]})");
    write("zero.measure", R"({"atoms":[]})");
  }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  Outcome run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" WBP_CLI_PATH "' " + args + " 2>/dev/null";
    Outcome r;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buffer{};
    while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe)) r.out.append(buffer.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, DistPrintsTwelveDigits) {
  const auto r = run("dist --p 2 a.measure b.measure");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "2.00000000000\n");
  EXPECT_EQ(run("dist --p 2 c.measure zero.measure").out, "1.41421356237\n");
}

TEST_F(Cli, DistOracle) {
  const auto r = run("dist --p 2 --oracle a.measure far.measure");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("agrees"), std::string::npos);
}

TEST_F(Cli, PlanThenCertifyRoundTrip) {
  const auto plan = run("plan --p 2 a.measure far.measure --out plan.json --duals duals.json");
  ASSERT_EQ(plan.status, 0);
  const auto cert = run("certify --p 2 a.measure far.measure plan.json --duals duals.json");
  EXPECT_EQ(cert.status, 0);
  const auto first_line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
  EXPECT_EQ(first_line(plan.out), "cost 13.0000000000");
  EXPECT_EQ(first_line(plan.out), first_line(cert.out));
  EXPECT_EQ(run("certify --p 2 a.measure far.measure plan.json").status, 0);
}

TEST_F(Cli, CertifyRejectsSuboptimalPlan) {
  write("bad.json", R"({"entries":[{"src":[0,1],"dst":[0,5],"mass":1}],"p":2})");
  EXPECT_EQ(run("certify --p 2 a.measure far.measure bad.json").status, 3);
  write("short.json", R"({"entries":[{"src":[0,1],"dst":[0,5],"mass":0.5}],"p":2})");
  EXPECT_EQ(run("certify --p 2 a.measure far.measure short.json").status, 2);
}

TEST_F(Cli, GeodesicWritesStepsPlusOne) {
  const auto r = run("geodesic --p 2 a.measure b.measure --steps 4 --out-dir geo");
  EXPECT_EQ(r.status, 0);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir_ / "geo")) ++files;
  EXPECT_EQ(files, 5u);
}

TEST_F(Cli, CurvatureTable) {
  const auto r = run("curvature-check c.measure a.measure b.measure --grid 11 --out k.csv");
  EXPECT_EQ(r.status, 0);
  std::ifstream csv(dir_ / "k.csv");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 12u);
  EXPECT_EQ(run("curvature-check --p 1 c.measure a.measure b.measure").status, 1);
}

TEST_F(Cli, DiagramDistance) {
  write("s.dgm", R"({"points":[[0,4]]})");
  write("t.dgm", R"({"points":[[1,5]]})");
  write("e.dgm", R"({"points":[]})");
  const auto r = run("diagram-dist --p 2 --oracle s.dgm t.dgm");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "1.41421356237");
  EXPECT_NE(r.out.find("match"), std::string::npos);
  const auto del = run("diagram-dist --p 2 s.dgm e.dgm");
  EXPECT_NE(del.out.find("2.82842712475"), std::string::npos);
  EXPECT_NE(del.out.find("delete"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  write("broken.measure", R"({"atoms":[{"point":[0,1],}]})");
  write("box.measure", R"({"pair":{"kind":"euclidean_box","lo":[0,0],"hi":[4,4]},"atoms":[{"point":[1,1],"mass":1}]})");
  EXPECT_EQ(run("dist a.measure broken.measure").status, 1);
  EXPECT_EQ(run("dist --p 0.5 a.measure b.measure").status, 1);
  EXPECT_EQ(run("dist a.measure box.measure").status, 2);
  EXPECT_EQ(run("dist a.measure missing.measure").status, 1);
  EXPECT_EQ(run("bogus").status, 1);
  std::string atoms;
  for (int k = 0; k < 12; ++k) atoms += std::string(k ? "," : "") + "{\"point\":[0," + std::to_string(k + 1) + "],\"mass\":1.5}";
  write("big.measure", "{\"atoms\":[" + atoms + "]}");
  EXPECT_EQ(run("dist --oracle big.measure big.measure").status, 1);
}

TEST_F(Cli, MachineOutputIsDeterministic) {
  const auto first = run("dist --format machine --oracle a.measure far.measure");
  const auto second = run("dist --format machine --oracle a.measure far.measure");
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.out.front(), '{');
}
