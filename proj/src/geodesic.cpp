#include "wbp/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "wbp/error.hpp"

namespace wbp {

namespace {

void require_geodesic_pair(const DiscreteMeasure& mu) {
  if (!mu.pair().geodesic_capable()) {
    throw Error(ErrorCode::unsupported_capability, "pair has no geodesic structure");
  }
}

void require_quadratic(double p) {
  if (p != 2.0) throw Error(ErrorCode::invalid_argument, "curvature comparison needs p = 2");
}

// Point on the ray from x through z at parameter 1 / t0, snapped back into X
// when rounding pushes it across the boundary.
Point extend_ray(const MetricPair& pair, const Point& x, const Point& z, double t0) {
  std::vector<double> c(x.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = x[k] + (z[k] - x[k]) / t0;
  if (pair.as_half_plane() != nullptr) {
    if (c[0] > c[1]) c[0] = c[1] = 0.5 * (c[0] + c[1]);
  } else if (const auto* box = pair.as_box()) {
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::clamp(c[k], box->lo[k], box->hi[k]);
  }
  return Point(std::move(c));
}

}  // namespace

GeodesicPath geodesic_path(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double p) {
  require_geodesic_pair(mu0);
  Solution solution = solve(mu0, mu1, p);
  return {mu0.pair_ptr(), std::move(solution.plan), p, solution.wb};
}

Interpolant interpolate_detailed(const GeodesicPath& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::invalid_argument, "t must lie in [0, 1]");
  const MetricPair& pair = *path.pair;
  std::vector<Atom> atoms;
  double dropped_mass = 0.0;
  std::size_t dropped_direct = 0;
  double min_direct_gap = std::numeric_limits<double>::infinity();
  for (const PlanEntry& e : path.plan.entries()) {
    const bool direct = !pair.in_boundary(e.source) && !pair.in_boundary(e.target);
    Point z = pair.geodesic_point(e.source, e.target, t);
    const double gap = pair.dist_to_boundary(z);
    if (direct) min_direct_gap = std::min(min_direct_gap, gap);
    if (gap <= kMembershipTolerance) {
      dropped_mass += e.mass;
      if (direct && t > 0.0 && t < 1.0) ++dropped_direct;
      continue;
    }
    atoms.push_back({std::move(z), e.mass});
  }
  return {DiscreteMeasure(path.pair, std::move(atoms)).canonical(), dropped_mass, dropped_direct,
          min_direct_gap};
}

DiscreteMeasure interpolate(const GeodesicPath& path, double t) {
  return interpolate_detailed(path, t).measure;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

double check_constant_speed(const GeodesicPath& path, std::span<const double> grid,
                            Execution exec) {
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::invalid_argument, "grid point outside [0, 1]");
  }
  std::vector<std::optional<DiscreteMeasure>> slices(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) { slices[i] = interpolate(path, grid[i]); });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    for (std::size_t b = a + 1; b < grid.size(); ++b) pairs.emplace_back(a, b);
  }
  std::vector<double> violation(pairs.size(), 0.0);
  for_each_index(exec, pairs.size(), [&](std::size_t k) {
    const auto [a, b] = pairs[k];
    const double expected = std::abs(grid[a] - grid[b]) * path.length;
    violation[k] = std::abs(wb_distance(*slices[a], *slices[b], path.p) - expected);
  });
  return violation.empty() ? 0.0 : *std::max_element(violation.begin(), violation.end());
}

std::vector<CurvatureRow> curvature_table(const DiscreteMeasure& base, const DiscreteMeasure& from,
                                          const DiscreteMeasure& to, std::span<const double> grid,
                                          double p, Execution exec) {
  require_quadratic(p);
  require_geodesic_pair(base);
  const GeodesicPath path = geodesic_path(from, to, p);
  const double base_from = solve(base, from, p).cost;
  const double base_to = solve(base, to, p).cost;
  const double from_to = solve(from, to, p).cost;

  std::vector<CurvatureRow> rows(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    CurvatureRow row;
    row.t = t;
    row.lhs = solve(base, interpolate(path, t), p).cost;
    row.rhs = (1.0 - t) * base_from + t * base_to - (1.0 - t) * t * from_to;
    row.margin = row.lhs - row.rhs;
    rows[i] = row;
  });
  return rows;
}

double curvature_comparison(const DiscreteMeasure& base, const DiscreteMeasure& from,
                            const DiscreteMeasure& to, std::span<const double> grid, double p,
                            Execution exec) {
  const auto rows = curvature_table(base, from, to, grid, p, exec);
  double margin = std::numeric_limits<double>::infinity();
  for (const CurvatureRow& row : rows) margin = std::min(margin, row.margin);
  return margin;
}

double angle_at_zero(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const DiscreteMeasure zero = DiscreteMeasure::zero(mu.pair_ptr());
  return solve(mu, zero, 2.0).cost + solve(nu, zero, 2.0).cost - solve(mu, nu, 2.0).cost;
}

BranchReport branch_probe(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1, double t0,
                          double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "branch probe needs p > 1");
  if (!(t0 > 0.0 && t0 < 1.0)) throw Error(ErrorCode::invalid_argument, "t0 must lie in (0, 1)");
  require_geodesic_pair(mu0);
  const MetricPair& pair = mu0.pair();

  Solution outer = solve(mu0, mu1, p);
  const GeodesicPath path{mu0.pair_ptr(), outer.plan, p, outer.wb};
  const DiscreteMeasure middle = interpolate(path, t0);
  const Solution inner = solve(mu0, middle, p);

  BranchReport report;
  report.degenerate = outer.alternative_optimum || inner.alternative_optimum;

  std::map<Point, std::set<Point>> senders;
  for (const PlanEntry& e : inner.plan.entries()) {
    if (!pair.in_boundary(e.target)) senders[e.target].insert(e.source);
  }
  report.map_induced = std::all_of(senders.begin(), senders.end(),
                                   [](const auto& kv) { return kv.second.size() == 1; });

  std::vector<Atom> extended;
  for (const PlanEntry& e : inner.plan.entries()) {
    if (pair.in_boundary(e.target)) continue;
    Point y = extend_ray(pair, e.source, e.target, t0);
    if (pair.in_boundary(y)) continue;
    extended.push_back({std::move(y), e.mass});
  }
  const DiscreteMeasure reproduced(mu0.pair_ptr(), std::move(extended));
  const double scale = 1.0 + mu1.total_mass();
  report.endpoint_reproduced = approx_equal(reproduced, mu1, 1e-9 * scale, 1e-9);
  return report;
}

}  // namespace wbp
