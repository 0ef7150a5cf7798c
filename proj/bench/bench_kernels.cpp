#include <benchmark/benchmark.h>

#include "instances.hpp"
#include "wbp/certify.hpp"
#include "wbp/geodesic.hpp"
#include "wbp/oracle.hpp"
#include "wbp/solver.hpp"

using namespace wbp;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_Solve(benchmark::State& state) {
  fixtures::InstanceGenerator gen(1);
  const auto mu = gen.measure(fixtures::half_plane_ptr(), state.range(0), state.range(0));
  const auto nu = gen.measure(fixtures::half_plane_ptr(), state.range(0), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(mu, nu, 2.0).cost);
}
BENCHMARK(BM_Solve)->Arg(8)->Arg(32)->Arg(128);

void BM_DiagramOracle(benchmark::State& state) {
  fixtures::InstanceGenerator gen(2);
  std::vector<Point> a;
  std::vector<Point> b;
  for (int k = 0; k < 4; ++k) {
    a.push_back(gen.half_plane_point());
    b.push_back(gen.half_plane_point());
  }
  const PersistenceDiagram sigma(fixtures::half_plane_ptr(), a);
  const PersistenceDiagram tau(fixtures::half_plane_ptr(), b);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_diagram(sigma, tau, 2.0, mode(state)).value);
  label(state);
}
BENCHMARK(BM_DiagramOracle)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Monotonicity(benchmark::State& state) {
  fixtures::InstanceGenerator gen(3);
  const auto mu = gen.measure(fixtures::half_plane_ptr(), 12, 12);
  const auto nu = gen.measure(fixtures::half_plane_ptr(), 12, 12);
  const auto plan = solve(mu, nu, 2.0).plan;
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_cyclical_monotonicity(plan, 2.0, 4, 1e-8, mode(state)).passed);
  }
  label(state);
}
BENCHMARK(BM_Monotonicity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConstantSpeed(benchmark::State& state) {
  fixtures::InstanceGenerator gen(4);
  const auto mu = gen.measure(fixtures::half_plane_ptr(), 6, 6);
  const auto nu = gen.measure(fixtures::half_plane_ptr(), 6, 6);
  const auto path = geodesic_path(mu, nu, 2.0);
  const auto grid = uniform_grid(11);
  for (auto _ : state) benchmark::DoNotOptimize(check_constant_speed(path, grid, mode(state)));
  label(state);
}
BENCHMARK(BM_ConstantSpeed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Curvature(benchmark::State& state) {
  fixtures::InstanceGenerator gen(5);
  const auto base = gen.measure(fixtures::half_plane_ptr(), 3, 3);
  const auto from = gen.measure(fixtures::half_plane_ptr(), 3, 3);
  const auto to = gen.measure(fixtures::half_plane_ptr(), 3, 3);
  const auto grid = uniform_grid(11);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_comparison(base, from, to, grid, 2.0, mode(state)));
  label(state);
}
BENCHMARK(BM_Curvature)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
