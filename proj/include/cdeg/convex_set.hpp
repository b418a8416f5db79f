#pragma once

#include "cdeg/common.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cdeg {

/// Tangent cone T_K(x) in active-constraint form {v : <a_i, v> <= 0}. An empty
/// row set means the full space.
class TangentCone {
 public:
  TangentCone(Vector base_point, Matrix rows);

  const Vector& base_point() const { return base_; }
  const Matrix& rows() const { return rows_; }
  Eigen::Index dim() const { return base_.size(); }
  bool full_space() const { return rows_.rows() == 0; }

  bool contains(const Vector& v, double tol = 1e-9) const;
  /// Largest constraint violation max_i <a_i, v>, 0 when v lies in the cone.
  double violation(const Vector& v) const;
  Vector project(const Vector& v) const;

  /// Restriction to coordinates [offset, offset + len). Only meaningful when
  /// every row is supported inside or outside that range.
  TangentCone restrict(Eigen::Index offset, Eigen::Index len) const;
  /// True when every row is supported inside one of the given consecutive blocks.
  bool factors_over(const std::vector<Eigen::Index>& block_sizes) const;

 private:
  Vector base_;
  Matrix rows_;
  bool coordinate_rows_ = true;
};

/// Closed convex set K: box (possibly unbounded), intersection of halfspaces,
/// Euclidean ball, or a product of lower-dimensional sets.
class ConvexSet {
 public:
  enum class Kind { Box, Halfspaces, Ball, Product };

  static ConvexSet box(Vector lo, Vector hi);
  static ConvexSet halfspaces(Matrix a, Vector b);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet product(std::vector<ConvexSet> factors);
  static ConvexSet whole_space(int n);

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  Eigen::Index dim() const { return dim_; }
  const Vector& feasible_point() const { return feasible_; }

  bool contains(const Vector& x, double tol = 0.0) const;
  Vector project(const Vector& y) const;
  double distance(const Vector& y) const;
  /// Distance from x to the complement of K (negative distance to K outside).
  double interior_depth(const Vector& x) const;
  /// <k - r(y), y - r(y)>; nonpositive for the metric projection.
  double variational_residual(const Vector& y, const Vector& k) const;
  TangentCone tangent_cone(const Vector& x, std::optional<double> activity_tol = std::nullopt) const;

  // Payload accessors, used by serialization.
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const Matrix& normals() const { return a_; }
  const Vector& offsets() const { return b_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const std::vector<ConvexSet>& factors() const { return factors_; }

 private:
  ConvexSet() = default;
  void append_active_rows(const Vector& x, double tol, std::vector<Vector>& rows, Eigen::Index offset,
                          Eigen::Index total) const;

  Kind kind_ = Kind::Box;
  Eigen::Index dim_ = 0;
  Vector lo_, hi_;
  Matrix a_;
  Vector b_;
  Vector center_;
  double radius_ = 0.0;
  std::vector<ConvexSet> factors_;
  Vector feasible_;
};

/// Point of (conv(hull_points) + radius*B) inside the cone, nearest to the
/// given target (the hull barycenter when omitted). Empty optional when the
/// intersection is empty.
std::optional<Vector> tangency_lp(const TangentCone& cone, const std::vector<Vector>& hull_points, double radius,
                                  std::optional<Vector> target = std::nullopt);

}  // namespace cdeg
