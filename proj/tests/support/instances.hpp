#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wbp/measure.hpp"

namespace wbp::fixtures {

// Seeded generators shared by the unit tests, the acceptance suite, the CLI
// self-test and the benchmark.

inline PairPtr half_plane_ptr() {
  static const PairPtr pair = make_pair_ptr(MetricPair::half_plane());
  return pair;
}

inline PairPtr box_ptr() {
  static const PairPtr pair = make_pair_ptr(MetricPair::euclidean_box({0.0, 0.0}, {4.0, 4.0}));
  return pair;
}

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin() { return index(0, 1) == 1; }

  /// Birth in [0, 5], persistence in (0.05, 3].
  Point half_plane_point() {
    const double b = uniform(0.0, 5.0);
    return Point{b, b + uniform(0.05, 3.0)};
  }

  /// Interior point of [0, 4]^2 at least 0.05 from the boundary.
  Point box_point() { return Point{uniform(0.05, 3.95), uniform(0.05, 3.95)}; }

  Point point_on(const PairPtr& pair) {
    return pair->as_box() != nullptr ? box_point() : half_plane_point();
  }

  double mass() { return uniform(0.1, 3.0); }

  DiscreteMeasure unit_measure(const PairPtr& pair, std::size_t max_atoms) {
    std::vector<Atom> atoms;
    const std::size_t n = index(0, max_atoms);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({point_on(pair), 1.0});
    return DiscreteMeasure(pair, std::move(atoms));
  }

  DiscreteMeasure measure(const PairPtr& pair, std::size_t max_atoms, std::size_t min_atoms = 0) {
    std::vector<Atom> atoms;
    const std::size_t n = index(min_atoms, max_atoms);
    for (std::size_t i = 0; i < n; ++i) atoms.push_back({point_on(pair), mass()});
    return DiscreteMeasure(pair, std::move(atoms));
  }

  PersistenceDiagram diagram(std::size_t max_points) {
    std::vector<Point> points;
    const std::size_t n = index(0, max_points);
    for (std::size_t i = 0; i < n; ++i) points.push_back(half_plane_point());
    return PersistenceDiagram(half_plane_ptr(), std::move(points));
  }

  PairPtr euclidean_pair() { return coin() ? box_ptr() : half_plane_ptr(); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace wbp::fixtures
