#include "wbp/metric_pair.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wbp/error.hpp"

namespace wbp {

namespace {

double euclidean(std::span<const double> x, std::span<const double> y) {
  if (x.size() == 2) return std::hypot(x[0] - y[0], x[1] - y[1]);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(sum);
}

Rational squared_euclidean_exact(std::span<const double> x, std::span<const double> y) {
  Rational sum = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    Rational diff = to_rational(x[k]) - to_rational(y[k]);
    sum += diff * diff;
  }
  return sum;
}

void require_finite_pair_point(const FiniteSpace& space, const Point& x) {
  if (x.size() != 1) {
    throw Error(ErrorCode::invalid_argument, "finite-pair point must carry one node index");
  }
  double v = x[0];
  if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(space.dist.size())) {
    throw Error(ErrorCode::invalid_argument, "node index " + to_string(x) + " out of range");
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double& c : coords_) {
    if (!std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "non-finite coordinate");
    if (c == 0.0) c = 0.0;
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

Point Point::node(std::size_t index) { return Point({static_cast<double>(index)}); }

std::size_t Point::node_index() const { return static_cast<std::size_t>(coords_.at(0)); }

std::string to_string(const Point& point) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out << ", ";
    out << point[i];
  }
  out << ')';
  return out.str();
}

std::string_view to_string(PairKind kind) noexcept {
  switch (kind) {
    case PairKind::half_plane: return "half_plane";
    case PairKind::euclidean_box: return "euclidean_box";
    case PairKind::finite: return "finite";
  }
  return "unknown";
}

MetricPair MetricPair::half_plane() { return MetricPair(HalfPlane{}); }

MetricPair MetricPair::euclidean_box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw Error(ErrorCode::invalid_argument, "box corners must be non-empty and of equal dimension");
  }
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]) || !(lo[k] < hi[k])) {
      throw Error(ErrorCode::invalid_argument, "box requires finite lo < hi in every coordinate");
    }
  }
  return MetricPair(EuclideanBox{std::move(lo), std::move(hi)});
}

MetricPair MetricPair::finite(std::vector<std::vector<double>> dist,
                              std::vector<std::size_t> boundary) {
  const std::size_t n = dist.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "finite pair needs at least one node");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) throw Error(ErrorCode::invalid_argument, "distance table is not square");
    if (dist[i][i] != 0.0) throw Error(ErrorCode::invalid_argument, "distance table diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      double d = dist[i][j];
      if (!std::isfinite(d) || d < 0.0) {
        throw Error(ErrorCode::invalid_argument, "distances must be finite and non-negative");
      }
      if (d != dist[j][i]) throw Error(ErrorCode::invalid_argument, "distance table is not symmetric");
      if (i != j && d == 0.0) {
        throw Error(ErrorCode::invalid_argument, "distinct nodes at distance zero");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double slack = 1e-12 * (dist[i][j] + dist[j][k]);
        if (dist[i][k] > dist[i][j] + dist[j][k] + slack) {
          throw Error(ErrorCode::invalid_argument,
                      "triangle inequality fails on nodes " + std::to_string(i) + ", " +
                          std::to_string(j) + ", " + std::to_string(k));
        }
      }
    }
  }
  if (boundary.empty()) throw Error(ErrorCode::invalid_argument, "boundary set must be non-empty");
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  if (boundary.back() >= n) throw Error(ErrorCode::invalid_argument, "boundary node out of range");
  return MetricPair(FiniteSpace{std::move(dist), std::move(boundary)});
}

PairKind MetricPair::kind() const noexcept {
  return static_cast<PairKind>(space_.index());
}

std::size_t MetricPair::point_size() const noexcept {
  if (const auto* box = as_box()) return box->lo.size();
  return kind() == PairKind::half_plane ? 2 : 1;
}

bool MetricPair::contains(const Point& x) const noexcept {
  try {
    validate(x);
    return true;
  } catch (const Error&) {
    return false;
  }
}

void MetricPair::validate(const Point& x) const {
  if (const auto* space = as_finite()) {
    require_finite_pair_point(*space, x);
    return;
  }
  if (x.size() != point_size()) {
    throw Error(ErrorCode::invalid_argument,
                "point " + to_string(x) + " has wrong dimension for a " +
                    std::string(to_string(kind())) + " pair");
  }
  if (as_half_plane() != nullptr) {
    if (x[0] > x[1]) {
      throw Error(ErrorCode::invalid_argument, "point " + to_string(x) + " lies below the diagonal");
    }
    return;
  }
  const auto& box = *as_box();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < box.lo[k] || x[k] > box.hi[k]) {
      throw Error(ErrorCode::invalid_argument, "point " + to_string(x) + " lies outside the box");
    }
  }
}

double MetricPair::distance(const Point& x, const Point& y) const {
  validate(x);
  validate(y);
  if (const auto* space = as_finite()) return space->dist[x.node_index()][y.node_index()];
  return euclidean(x.coords(), y.coords());
}

double MetricPair::dist_to_boundary(const Point& x) const {
  validate(x);
  if (as_half_plane() != nullptr) return (x[1] - x[0]) / std::numbers::sqrt2;
  if (const auto* box = as_box()) {
    double best = x[0] - box->lo[0];
    for (std::size_t k = 0; k < x.size(); ++k) {
      best = std::min({best, x[k] - box->lo[k], box->hi[k] - x[k]});
    }
    return best;
  }
  const auto& space = *as_finite();
  const auto& row = space.dist[x.node_index()];
  double best = row[space.boundary.front()];
  for (std::size_t a : space.boundary) best = std::min(best, row[a]);
  return best;
}

Point MetricPair::project_to_boundary(const Point& x) const {
  validate(x);
  if (as_half_plane() != nullptr) {
    double mid = 0.5 * (x[0] + x[1]);
    return Point{mid, mid};
  }
  if (const auto* box = as_box()) {
    const double gap = dist_to_boundary(x);
    std::optional<Point> best;
    auto consider = [&](std::size_t k, double face) {
      std::vector<double> c(x.coords().begin(), x.coords().end());
      c[k] = face;
      Point candidate(std::move(c));
      if (!best || candidate < *best) best = std::move(candidate);
    };
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] - box->lo[k] == gap) consider(k, box->lo[k]);
      if (box->hi[k] - x[k] == gap) consider(k, box->hi[k]);
    }
    return *best;
  }
  const auto& space = *as_finite();
  const auto& row = space.dist[x.node_index()];
  std::size_t best = space.boundary.front();
  for (std::size_t a : space.boundary) {
    if (row[a] < row[best]) best = a;
  }
  return Point::node(best);
}

bool MetricPair::in_boundary(const Point& x, double tol) const {
  if (tol < 0.0) throw Error(ErrorCode::invalid_argument, "membership tolerance must be non-negative");
  return dist_to_boundary(x) <= tol;
}

Point MetricPair::geodesic_point(const Point& x, const Point& y, double t) const {
  if (!geodesic_capable()) {
    throw Error(ErrorCode::unsupported_capability, "finite pairs carry no geodesic structure");
  }
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::invalid_argument, "geodesic time outside [0, 1]");
  validate(x);
  validate(y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  std::vector<double> c(x.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = (1.0 - t) * x[k] + t * y[k];
  // Rounding may push a convex combination a hair outside X.
  if (as_half_plane() != nullptr) {
    if (c[0] > c[1]) c[0] = c[1] = 0.5 * (c[0] + c[1]);
  } else {
    const auto& box = *as_box();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::clamp(c[k], box.lo[k], box.hi[k]);
  }
  return Point(std::move(c));
}

std::optional<Rational> MetricPair::distance_pow_exact(const Point& x, const Point& y, int p) const {
  validate(x);
  validate(y);
  if (p < 1) return std::nullopt;
  if (const auto* space = as_finite()) {
    return pow_exact(to_rational(space->dist[x.node_index()][y.node_index()]), p);
  }
  if (p % 2 != 0) return std::nullopt;
  return pow_exact(squared_euclidean_exact(x.coords(), y.coords()), p / 2);
}

std::optional<Rational> MetricPair::boundary_distance_pow_exact(const Point& x, int p) const {
  validate(x);
  if (p < 1) return std::nullopt;
  if (as_half_plane() != nullptr) {
    if (p % 2 != 0) return std::nullopt;
    Rational gap = to_rational(x[1]) - to_rational(x[0]);
    return pow_exact(gap * gap / 2, p / 2);
  }
  if (const auto* box = as_box()) {
    Rational best = to_rational(x[0]) - to_rational(box->lo[0]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      best = std::min(best, Rational(to_rational(x[k]) - to_rational(box->lo[k])));
      best = std::min(best, Rational(to_rational(box->hi[k]) - to_rational(x[k])));
    }
    return pow_exact(best, p);
  }
  return pow_exact(to_rational(dist_to_boundary(x)), p);
}

}  // namespace wbp
