#pragma once

#include "cdeg/common.hpp"
#include "cdeg/convex_set.hpp"

#include <array>
#include <functional>
#include <vector>

namespace cdeg {

/// Oriented boundary of a region in R^1, R^2 or R^3: signed points, oriented
/// segments (counter-clockwise) or outward-oriented triangles.
struct BoundaryChain {
  int dim = 0;
  std::vector<Vector> nodes;
  std::vector<std::pair<int, int>> points;      // (node, orientation +-1), dim 1
  std::vector<std::array<int, 2>> segments;     // dim 2
  std::vector<std::array<int, 3>> triangles;    // dim 3
  double mesh_size = 0.0;                       // every boundary point is within this of a node
};

/// Regular grid of cells over a box, with a membership predicate on cell
/// centers; its boundary chain encloses the union of member cells.
BoundaryChain cell_region_boundary(const Vector& lo, const Vector& hi, const std::vector<int>& cells,
                                   const std::function<bool(const Vector&)>& member);

/// U = shape ∩ K with shape an open ball or box.
class OpenRegion {
 public:
  enum class Shape { Ball, Box };

  static OpenRegion ball(ConvexSet ambient, Vector center, double radius, int mesh_level = 0);
  static OpenRegion box(ConvexSet ambient, Vector lo, Vector hi, int mesh_level = 0);

  Eigen::Index dim() const { return ambient_.dim(); }
  const ConvexSet& ambient() const { return ambient_; }
  Shape shape() const { return shape_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  int mesh_level() const { return mesh_level_; }

  bool in_shape(const Vector& x) const;
  bool contains(const Vector& x) const;
  double diameter() const;
  Vector bbox_lo() const;
  Vector bbox_hi() const;
  /// cl U lies in the interior of K.
  bool inside_ambient_interior() const;

  /// Boundary of the shape itself (full space), refined 2^level times.
  BoundaryChain shape_boundary(int level) const;
  /// Nodes of the shape boundary that lie in K: a sample of ∂_K U.
  std::vector<Vector> relative_boundary_nodes(int level) const;
  /// Grid points of U, used as starting points for zero searches.
  std::vector<Vector> interior_grid(int per_axis) const;

 private:
  OpenRegion(ConvexSet ambient) : ambient_(std::move(ambient)) {}

  ConvexSet ambient_;
  Shape shape_ = Shape::Ball;
  Vector center_;
  double radius_ = 0.0;
  Vector lo_, hi_;
  int mesh_level_ = 0;
};

}  // namespace cdeg
