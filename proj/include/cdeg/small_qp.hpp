#pragma once

#include "cdeg/common.hpp"

#include <vector>

namespace cdeg {

struct PolyhedralProjection {
  Vector point;
  Vector multipliers;  // one per constraint row, zero when inactive
  int iterations = 0;
};

/// Euclidean projection of y onto {x : G x <= b} by a dual active-set
/// (Goldfarb-Idnani) iteration specialised to the identity Hessian. Does not
/// need a feasible start. Throws PreconditionError when the polyhedron is
/// empty and NumericalError when the iteration cap (50 per row) is reached
/// or the Kuhn-Tucker check fails.
PolyhedralProjection project_onto_polyhedron(const Matrix& g, const Vector& b, const Vector& y);

struct HullProjection {
  Vector point;
  std::vector<double> weights;  // convex weights, same order as the input points
};

/// Nearest point of conv(points) to y (Wolfe's minimum-norm-point method on
/// the shifted points).
HullProjection project_onto_hull(const std::vector<Vector>& points, const Vector& y);

}  // namespace cdeg

namespace cdeg {

struct IntersectionPoint {
  Vector point;  // lies in the second set
  double gap;    // distance from point to the first set
  int iterations;
};

/// Dykstra's alternating projections for the nearest point of C1 ∩ C2 to
/// target. When the intersection is empty the result carries a positive gap.
IntersectionPoint dykstra(const Vector& target, const std::function<Vector(const Vector&)>& project_first,
                          const std::function<Vector(const Vector&)>& project_second, int max_iterations = 20000);

}  // namespace cdeg
