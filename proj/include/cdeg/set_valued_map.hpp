#pragma once

#include "cdeg/common.hpp"
#include "cdeg/convex_set.hpp"
#include "cdeg/small_qp.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cdeg {

/// conv(points) + radius * B on a consecutive block of coordinates.
struct HullBlock {
  std::vector<Vector> points;
  double radius = 0.0;

  Eigen::Index dim() const { return points.front().size(); }
  Vector barycenter() const;
  Vector project(const Vector& y) const;
  double distance(const Vector& y) const;
};

/// Value of a set-valued map: a product of hull blocks. Ordinary maps have a
/// single block; Nemytskii lifts have one block per grid node.
class ConvexValue {
 public:
  ConvexValue() = default;
  explicit ConvexValue(std::vector<HullBlock> blocks);
  ConvexValue(std::vector<Vector> points, double radius);

  const std::vector<HullBlock>& blocks() const { return blocks_; }
  std::vector<Eigen::Index> block_sizes() const;
  Eigen::Index dim() const;
  bool single_block() const { return blocks_.size() == 1; }

  /// Single-block accessors.
  const std::vector<Vector>& hull_points() const;
  double radius() const;

  Vector barycenter() const;
  Vector project(const Vector& y) const;
  double distance(const Vector& y) const;
  bool contains(const Vector& y, double tol) const;
  /// Support function sup_{v in value} <d, v>.
  double support(const Vector& d) const;
  /// Upper bound for sup ||v|| over the value.
  double max_norm() const;

 private:
  std::vector<HullBlock> blocks_;
};

using Generator = std::function<Vector(double, const Vector&)>;
using RadiusFunction = std::function<double(double, const Vector&)>;

/// F(t, x) = conv{gamma_j(t, x)} + rho(t, x) B, or a product of such values.
/// Immutable; evaluation is pure.
class SetValuedMap {
 public:
  using Evaluator = std::function<ConvexValue(double, const Vector&)>;

  static SetValuedMap from_generators(Eigen::Index dim, std::vector<Generator> generators, RadiusFunction radius,
                                      double growth_c, std::string name = "generators");
  static SetValuedMap single_valued(Eigen::Index dim, Generator f, double growth_c, std::string name = "single");
  static SetValuedMap from_evaluator(Eigen::Index dim, int generator_count, Evaluator eval, double growth_c,
                                     bool single_valued, std::string name);

  Eigen::Index dim() const { return dim_; }
  int generator_count() const { return generator_count_; }
  double growth_c() const { return growth_c_; }
  bool is_single_valued() const { return single_valued_; }
  const std::string& name() const { return name_; }

  ConvexValue evaluate(double t, const Vector& x) const;

 private:
  Eigen::Index dim_ = 0;
  int generator_count_ = 1;
  double growth_c_ = 1.0;
  bool single_valued_ = false;
  std::string name_;
  Evaluator eval_;
};

/// Pointwise reaction phi(t, i, y) in R^n on grid node i, with its pointwise
/// constraint set.
struct PointwiseReaction {
  Eigen::Index pointwise_dim = 1;
  std::vector<std::function<Vector(double, int, const Vector&)>> generators;
  std::function<double(double, int, const Vector&)> radius;  // empty means 0
  ConvexSet constraint = ConvexSet::whole_space(1);
  double growth_c = 1.0;
  std::string name = "pointwise";
};

SetValuedMap nemytskii(const PointwiseReaction& phi, int grid_dim);

/// Samples phi on its constraint set and reports the first point where
/// phi(t, i, y) misses T_K(y); empty when tangency holds on every sample.
std::optional<std::string> check_pointwise_tangency(const PointwiseReaction& phi, int grid_dim, int samples,
                                                    std::uint64_t seed);

/// Inner approximation of conv F([0, t], x) from uniform time samples.
ConvexValue hull_map(const SetValuedMap& f, double t, const Vector& x, int time_samples);
SetValuedMap hull_map_at(const SetValuedMap& f, double t, int time_samples);

/// Minkowski combination (1 - z) f(x) + z G(x) for single-valued f.
SetValuedMap blend(const Generator& f, const SetValuedMap& g, double z);

struct SelectionRule {
  enum class Kind { Barycenter, Vertex, Weights };
  Kind kind = Kind::Barycenter;
  int vertex = 0;
  std::vector<double> weights;

  static SelectionRule barycenter() { return {}; }
  static SelectionRule vertex_of(int j) { return {Kind::Vertex, j, {}}; }
  /// Fixed random convex weights drawn from the seed; seed 0 is the barycenter.
  static SelectionRule seeded(std::uint64_t seed, int generator_count);
};

/// Tangent selection: the point of F(t,x) ∩ T_K(x) nearest to a rule-defined
/// target inside F(t,x). Points that are only within alpha of F(t,x) are
/// accepted; anything farther raises TangencyViolation.
class TangentSelection {
 public:
  TangentSelection(SetValuedMap f, ConvexSet k, double alpha, SelectionRule rule = SelectionRule::barycenter());

  Vector operator()(double t, const Vector& x) const;
  /// Target point inside F(t,x) for the rule.
  Vector target(const ConvexValue& value) const;
  double alpha() const { return alpha_; }
  const SetValuedMap& map() const { return f_; }
  const ConvexSet& set() const { return k_; }
  VectorField as_field() const;

 private:
  SetValuedMap f_;
  ConvexSet k_;
  double alpha_;
  SelectionRule rule_;
};

/// Nearest point of value ∩ cone to target, with the distance from the
/// returned point (which lies in the cone) to the value.
IntersectionPoint nearest_tangent_point(const ConvexValue& value, const TangentCone& cone, const Vector& target);

std::vector<double> husc_probe(const SetValuedMap& f, double t, const Vector& x, const std::vector<double>& deltas,
                               int random_directions = 8, std::uint64_t seed = 1);

/// Largest ratio sup||F(t,x)|| / (growth_c (1 + ||x||)) over random samples
/// with x in [-radius, radius]^N; the growth certificate holds when <= 1.
double growth_ratio(const SetValuedMap& f, int samples, double radius, std::uint64_t seed);

namespace presets {
SetValuedMap zero(Eigen::Index dim);
SetValuedMap linear(const Matrix& b, const Vector& c);
SetValuedMap interval(Eigen::Index dim, double lo, double hi);
SetValuedMap constant_set(const std::vector<Vector>& points, double radius);
PointwiseReaction logistic_reaction(double rate);
SetValuedMap logistic_interval(int grid_dim, double rate);
SetValuedMap regularized_sign(double center);
SetValuedMap polynomial(Eigen::Index dim, const std::vector<double>& coefficients);
}  // namespace presets

}  // namespace cdeg
