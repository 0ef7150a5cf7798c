#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "wbp/certify.hpp"
#include "wbp/error.hpp"
#include "wbp/geodesic.hpp"
#include "wbp/io.hpp"
#include "wbp/oracle.hpp"
#include "wbp/solver.hpp"

namespace fs = std::filesystem;
using wbp::io::json;

namespace {

enum Exit { ok = 0, usage = 1, mismatch = 2, certificate = 3 };

constexpr double kOracleAgreement = 1e-9;

struct Common {
  double p = 2.0;
  std::optional<double> tol;
  std::string format = "text";
  bool machine() const { return format == "machine"; }
};

void add_common(CLI::App* cmd, Common& common, bool with_p = true) {
  if (with_p) cmd->add_option("--p", common.p, "Exponent p >= 1")->capture_default_str();
  cmd->add_option("--tol", common.tol, "Tolerance override");
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
}

std::string g12(double value) { return fmt::format("{:#.12g}", value); }

std::string point_text(const wbp::Point& x) { return wbp::to_string(x); }

void emit(const json& doc) { std::cout << doc.dump() << '\n'; }

int check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    std::cerr << "error: p must be a finite number >= 1\n";
    return usage;
  }
  return ok;
}

int exit_for(wbp::ErrorCode code) {
  switch (code) {
    case wbp::ErrorCode::pair_mismatch:
    case wbp::ErrorCode::marginal_mismatch:
    case wbp::ErrorCode::inadmissible_plan:
    case wbp::ErrorCode::missing_potential:
      return mismatch;
    default:
      return usage;
  }
}

int run_dist(const Common& c, const std::string& a, const std::string& b, bool oracle) {
  if (int rc = check_p(c.p)) return rc;
  const auto mu = wbp::io::load_measure(a);
  const auto nu = wbp::io::load_measure(b);
  const auto s = wbp::solve(mu, nu, c.p);
  std::optional<double> brute;
  if (oracle) brute = std::pow(wbp::brute_force_wb(mu, nu, c.p).value, 1.0 / c.p);
  const double tol = c.tol.value_or(kOracleAgreement);
  const bool agree = !brute || std::abs(std::pow(*brute, c.p) - s.cost) <= tol;
  if (c.machine()) {
    json doc{{"command", "dist"}, {"p", c.p}, {"wb", s.wb}, {"cost", s.cost}};
    if (brute) {
      doc["oracle"] = *brute;
      doc["agree"] = agree;
    }
    emit(doc);
  } else {
    std::cout << g12(s.wb) << '\n';
    if (brute) std::cout << "oracle " << g12(*brute) << (agree ? " (agrees)" : " (MISMATCH)") << '\n';
  }
  return agree ? ok : mismatch;
}

int run_plan(const Common& c, const std::string& a, const std::string& b, const std::string& plan_out,
             const std::string& duals_out) {
  if (int rc = check_p(c.p)) return rc;
  const auto mu = wbp::io::load_measure(a);
  const auto nu = wbp::io::load_measure(b);
  const auto s = wbp::solve(mu, nu, c.p);
  wbp::io::write_json_file(plan_out, wbp::io::to_json(s.plan));
  wbp::io::write_json_file(duals_out, wbp::io::to_json(s.duals));
  if (c.machine()) {
    emit({{"command", "plan"}, {"p", c.p}, {"wb", s.wb}, {"cost", s.cost},
          {"entries", s.plan.size()}, {"plan", plan_out}, {"duals", duals_out}});
  } else {
    std::cout << "cost " << g12(s.cost) << '\n'
              << "wb " << g12(s.wb) << '\n'
              << "wrote " << plan_out << " (" << s.plan.size() << " entries) and " << duals_out << '\n';
  }
  return ok;
}

int run_certify(const Common& c, const std::string& a, const std::string& b,
                const std::string& plan_file, const std::string& duals_file) {
  if (int rc = check_p(c.p)) return rc;
  const auto mu = wbp::io::load_measure(a);
  const auto nu = wbp::io::load_measure(b);
  const auto plan = wbp::io::load_plan(plan_file, mu.pair_ptr());
  std::optional<wbp::DualPotentials> duals;
  if (!duals_file.empty()) duals = wbp::io::load_duals(duals_file);
  wbp::CertifyTolerances tol;
  if (c.tol) tol.support = tol.monotonicity = tol.potentials = tol.boundary = tol.cost = *c.tol;
  const auto report =
      wbp::certify_optimal(mu, nu, plan, duals ? &*duals : nullptr, c.p, tol);
  if (c.machine()) {
    json doc{{"command", "certify"},
             {"p", c.p},
             {"passed", report.passed()},
             {"plan_cost", report.plan_cost},
             {"optimal_cost", report.optimal_cost},
             {"concentrated_on_S", report.concentrated_on_S.passed},
             {"cyclically_monotone", report.cyclically_monotone.passed},
             {"boundary_shipping", report.boundary_shipping.passed},
             {"matches_resolve", report.matches_resolve.passed},
             {"worst_violation", report.worst_violation}};
    if (report.potentials) doc["potentials"] = report.potentials->passed;
    emit(doc);
  } else {
    std::cout << "cost " << g12(report.plan_cost) << '\n' << wbp::describe(report);
  }
  return report.passed() ? ok : certificate;
}

int run_geodesic(const Common& c, const std::string& a, const std::string& b, int steps,
                 const std::string& out_dir) {
  if (int rc = check_p(c.p)) return rc;
  if (steps < 1) {
    std::cerr << "error: --steps must be at least 1\n";
    return usage;
  }
  const auto mu0 = wbp::io::load_measure(a);
  const auto mu1 = wbp::io::load_measure(b);
  const auto path = wbp::geodesic_path(mu0, mu1, c.p);
  fs::create_directories(out_dir);
  json files = json::array();
  for (int k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    const fs::path file = fs::path(out_dir) / fmt::format("mu_{:03d}.json", k);
    wbp::io::write_json_file(file, wbp::io::to_json(wbp::interpolate(path, t)));
    files.push_back(file.string());
  }
  if (c.machine()) {
    emit({{"command", "geodesic"}, {"p", c.p}, {"length", path.length}, {"files", files}});
  } else {
    std::cout << "length " << g12(path.length) << '\n'
              << "wrote " << files.size() << " measures to " << out_dir << '\n';
  }
  return ok;
}

int run_curvature(const Common& c, const std::string& base, const std::string& from,
                  const std::string& to, int grid_points, const std::string& out) {
  if (c.p != 2.0) {
    std::cerr << "error: curvature-check needs p = 2\n";
    return usage;
  }
  if (grid_points < 2) {
    std::cerr << "error: --grid must be at least 2\n";
    return usage;
  }
  const auto grid = wbp::uniform_grid(static_cast<std::size_t>(grid_points));
  const auto rows = wbp::curvature_table(wbp::io::load_measure(base), wbp::io::load_measure(from),
                                         wbp::io::load_measure(to), grid, 2.0);
  std::ofstream csv(out);
  if (!csv) throw wbp::Error(wbp::ErrorCode::parse_error, out + ": cannot write file");
  csv << "t,lhs,rhs,margin\n";
  double margin = rows.front().margin;
  for (const auto& row : rows) {
    csv << fmt::format("{},{},{},{}\n", row.t, row.lhs, row.rhs, row.margin);
    margin = std::min(margin, row.margin);
  }
  const double tol = c.tol.value_or(1e-8);
  const bool passed = margin >= -tol;
  if (c.machine()) {
    emit({{"command", "curvature-check"}, {"min_margin", margin}, {"passed", passed}, {"table", out}});
  } else {
    std::cout << "min margin " << g12(margin) << (passed ? " (ok)" : " (VIOLATION)") << '\n'
              << "wrote " << out << '\n';
  }
  return passed ? ok : certificate;
}

int run_diagram(const Common& c, const std::string& a, const std::string& b, bool oracle) {
  if (int rc = check_p(c.p)) return rc;
  const auto sigma = wbp::io::load_diagram(a);
  const auto tau = wbp::io::load_diagram(b);
  const auto m = wbp::diagram_distance(sigma, tau, c.p);
  std::optional<double> brute;
  if (oracle) brute = std::pow(wbp::brute_force_diagram(sigma, tau, c.p).value, 1.0 / c.p);
  const double tol = c.tol.value_or(kOracleAgreement);
  const bool agree = !brute || std::abs(*brute - m.dp) <= tol;
  if (c.machine()) {
    json matched = json::array();
    for (const auto& [x, y] : m.matched) {
      matched.push_back({wbp::io::to_json(x), wbp::io::to_json(y)});
    }
    json deletions = json::array();
    for (const auto& x : m.deletions) deletions.push_back(wbp::io::to_json(x));
    json insertions = json::array();
    for (const auto& y : m.insertions) insertions.push_back(wbp::io::to_json(y));
    json doc{{"command", "diagram-dist"}, {"p", c.p}, {"dp", m.dp}, {"matched", matched},
             {"deletions", deletions}, {"insertions", insertions}};
    if (brute) {
      doc["oracle"] = *brute;
      doc["agree"] = agree;
    }
    emit(doc);
  } else {
    std::cout << g12(m.dp) << '\n';
    for (const auto& [x, y] : m.matched) std::cout << "match  " << point_text(x) << " -> " << point_text(y) << '\n';
    for (const auto& x : m.deletions) std::cout << "delete " << point_text(x) << '\n';
    for (const auto& y : m.insertions) std::cout << "insert " << point_text(y) << '\n';
    if (brute) std::cout << "oracle " << g12(*brute) << (agree ? " (agrees)" : " (MISMATCH)") << '\n';
  }
  return agree ? ok : mismatch;
}

int run_self_test(const Common& c, std::uint64_t seed) {
  wbp::acceptance::Options options;
  options.seed = seed;
  json lines = json::array();
  int failed = 0;
  wbp::acceptance::run_all(options, [&](const wbp::acceptance::CriterionResult& r) {
    if (!r.passed) ++failed;
    if (c.machine()) {
      lines.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    } else {
      std::cout << wbp::acceptance::format_line(r) << std::endl;
    }
  });
  if (c.machine()) {
    emit({{"command", "self-test"}, {"seed", seed}, {"criteria", lines}, {"failed", failed}});
  } else {
    std::cout << (failed == 0 ? "all 10 criteria passed" : fmt::format("{} criteria failed", failed)) << '\n';
  }
  return failed == 0 ? ok : certificate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal partial transport on metric pairs"};
  app.require_subcommand(1);
  Common common;
  std::string a;
  std::string b;
  std::string third;
  bool oracle = false;
  std::string plan_out = "plan.json";
  std::string duals_out = "duals.json";
  std::string duals_in;
  int steps = 10;
  int grid = 11;
  std::string out_dir = "geodesic";
  std::string csv_out = "curvature.csv";
  std::uint64_t seed = wbp::acceptance::Options{}.seed;

  auto* dist = app.add_subcommand("dist", "Print Wb_p between two measures");
  add_common(dist, common);
  dist->add_option("first", a, "Measure file")->required()->check(CLI::ExistingFile);
  dist->add_option("second", b, "Measure file")->required()->check(CLI::ExistingFile);
  dist->add_flag("--oracle", oracle, "Cross-check against the brute-force oracle");

  auto* plan = app.add_subcommand("plan", "Write an optimal plan and its potentials");
  add_common(plan, common);
  plan->add_option("first", a, "Measure file")->required()->check(CLI::ExistingFile);
  plan->add_option("second", b, "Measure file")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", plan_out, "Plan output file")->capture_default_str();
  plan->add_option("--duals", duals_out, "Potentials output file")->capture_default_str();

  auto* certify = app.add_subcommand("certify", "Check optimality certificates of a plan");
  add_common(certify, common);
  certify->add_option("first", a, "Measure file")->required()->check(CLI::ExistingFile);
  certify->add_option("second", b, "Measure file")->required()->check(CLI::ExistingFile);
  certify->add_option("plan", third, "Plan file")->required()->check(CLI::ExistingFile);
  certify->add_option("--duals", duals_in, "Potentials file")->check(CLI::ExistingFile);

  auto* geodesic = app.add_subcommand("geodesic", "Write measures along a geodesic");
  add_common(geodesic, common);
  geodesic->add_option("first", a, "Measure file")->required()->check(CLI::ExistingFile);
  geodesic->add_option("second", b, "Measure file")->required()->check(CLI::ExistingFile);
  geodesic->add_option("--steps", steps, "Number of steps k (k + 1 files)")->capture_default_str();
  geodesic->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  std::string base;
  auto* curvature = app.add_subcommand("curvature-check", "Comparison-inequality margin table");
  add_common(curvature, common);
  curvature->add_option("base", base, "Measure file")->required()->check(CLI::ExistingFile);
  curvature->add_option("from", a, "Measure file")->required()->check(CLI::ExistingFile);
  curvature->add_option("to", b, "Measure file")->required()->check(CLI::ExistingFile);
  curvature->add_option("--grid", grid, "Grid points on [0, 1]")->capture_default_str();
  curvature->add_option("--out", csv_out, "CSV output file")->capture_default_str();

  auto* diagram = app.add_subcommand("diagram-dist", "Print d_p and an optimal matching");
  add_common(diagram, common);
  diagram->add_option("first", a, "Diagram file")->required()->check(CLI::ExistingFile);
  diagram->add_option("second", b, "Diagram file")->required()->check(CLI::ExistingFile);
  diagram->add_flag("--oracle", oracle, "Cross-check against the brute-force oracle");

  auto* self_test = app.add_subcommand("self-test", "Run the acceptance suite");
  add_common(self_test, common, false);
  self_test->add_option("--seed", seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    if (*dist) return run_dist(common, a, b, oracle);
    if (*plan) return run_plan(common, a, b, plan_out, duals_out);
    if (*certify) return run_certify(common, a, b, third, duals_in);
    if (*geodesic) return run_geodesic(common, a, b, steps, out_dir);
    if (*curvature) return run_curvature(common, base, a, b, grid, csv_out);
    if (*diagram) return run_diagram(common, a, b, oracle);
    if (*self_test) return run_self_test(common, seed);
  } catch (const wbp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
