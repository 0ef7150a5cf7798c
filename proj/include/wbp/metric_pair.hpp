#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wbp/rational.hpp"

namespace wbp {

/// Absolute tolerance used to decide whether a point lies on the boundary
/// set A. Interpolated atoms land near A, never exactly on it.
inline constexpr double kMembershipTolerance = 1e-9;

/// A point of the ambient space X. Euclidean pairs use the coordinates
/// directly; finite pairs store the node index as the single coordinate.
///
/// Coordinates are canonicalised on construction (-0.0 becomes 0.0) so that
/// equality and ordering are bitwise-stable and points can key ordered maps.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point node(std::size_t index);

  std::span<const double> coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  /// Node index of a finite-pair point.
  std::size_t node_index() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const Point& point);

enum class PairKind { half_plane, euclidean_box, finite };

std::string_view to_string(PairKind kind) noexcept;

/// The upper half-plane {(b, d) : b <= d} with the diagonal as boundary.
struct HalfPlane {
  friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

/// The closed box [lo, hi] in R^n with its topological boundary.
struct EuclideanBox {
  std::vector<double> lo;
  std::vector<double> hi;
  friend bool operator==(const EuclideanBox&, const EuclideanBox&) = default;
};

/// A finite metric space given by its distance table, with a designated
/// non-empty node subset as boundary.
struct FiniteSpace {
  std::vector<std::vector<double>> dist;
  std::vector<std::size_t> boundary;  // sorted, unique
  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;
};

/// A metric pair (X, A): ambient space, closed non-empty boundary subset,
/// distance, projection onto A and, for the convex Euclidean kinds,
/// straight-line geodesics.
///
/// Values are immutable after construction and safe to share across threads.
/// Two pairs compare equal when their kind and parameters agree.
class MetricPair {
 public:
  static MetricPair half_plane();
  static MetricPair euclidean_box(std::vector<double> lo, std::vector<double> hi);
  /// Validates the table exhaustively: square, symmetric, zero diagonal,
  /// positive off-diagonal, and the triangle inequality on every triple.
  static MetricPair finite(std::vector<std::vector<double>> dist,
                           std::vector<std::size_t> boundary);

  PairKind kind() const noexcept;
  bool geodesic_capable() const noexcept { return kind() != PairKind::finite; }
  /// Number of coordinates a valid point carries.
  std::size_t point_size() const noexcept;

  const HalfPlane* as_half_plane() const { return std::get_if<HalfPlane>(&space_); }
  const EuclideanBox* as_box() const { return std::get_if<EuclideanBox>(&space_); }
  const FiniteSpace* as_finite() const { return std::get_if<FiniteSpace>(&space_); }

  bool contains(const Point& x) const noexcept;
  /// Throws Error(invalid_argument) when x is not a point of this pair's X.
  void validate(const Point& x) const;

  double distance(const Point& x, const Point& y) const;
  double dist_to_boundary(const Point& x) const;
  /// Nearest boundary point. Ties go to the smallest node index (finite) or
  /// to the lexicographically smallest face projection (box).
  Point project_to_boundary(const Point& x) const;
  bool in_boundary(const Point& x, double tol = kMembershipTolerance) const;
  /// Constant-speed geodesic from x to y evaluated at t in [0, 1].
  /// Throws Error(unsupported_capability) on finite pairs.
  Point geodesic_point(const Point& x, const Point& y, double t) const;

  /// d(x, y)^p in exact arithmetic. Euclidean kinds need an even p;
  /// finite pairs accept any positive integer p.
  std::optional<Rational> distance_pow_exact(const Point& x, const Point& y, int p) const;
  /// d(x, A)^p in exact arithmetic, under the same exponent rules
  /// (the box boundary distance is piecewise linear, so any p works there).
  std::optional<Rational> boundary_distance_pow_exact(const Point& x, int p) const;

  friend bool operator==(const MetricPair&, const MetricPair&) = default;

 private:
  using Space = std::variant<HalfPlane, EuclideanBox, FiniteSpace>;
  explicit MetricPair(Space space) : space_(std::move(space)) {}

  Space space_;
};

}  // namespace wbp
