#include "cdeg/set_valued_map.hpp"

#include "cdeg/small_qp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cdeg {

// ------------------------------------------------------------------ HullBlock

Vector HullBlock::barycenter() const {
  Vector b = Vector::Zero(dim());
  for (const auto& p : points) b += p;
  return b / static_cast<double>(points.size());
}

Vector HullBlock::project(const Vector& y) const {
  const Vector p = points.size() == 1 ? points.front() : project_onto_hull(points, y).point;
  const double d = (y - p).norm();
  if (d <= radius) return y;
  return p + (radius / d) * (y - p);
}

double HullBlock::distance(const Vector& y) const {
  const Vector p = points.size() == 1 ? points.front() : project_onto_hull(points, y).point;
  return std::max(0.0, (y - p).norm() - radius);
}

// ---------------------------------------------------------------- ConvexValue

ConvexValue::ConvexValue(std::vector<HullBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InvalidInput("convex value: no blocks");
  for (const auto& b : blocks_) {
    if (b.points.empty()) throw InvalidInput("convex value: empty hull");
    if (!(b.radius >= 0.0)) throw InvalidInput("convex value: negative radius");
    for (const auto& p : b.points) {
      if (p.size() != b.points.front().size()) throw InvalidInput("convex value: ragged hull points");
      if (!p.allFinite()) throw NumericalError("convex value: non-finite generator value");
    }
  }
}

ConvexValue::ConvexValue(std::vector<Vector> points, double radius)
    : ConvexValue(std::vector<HullBlock>{HullBlock{std::move(points), radius}}) {}

std::vector<Eigen::Index> ConvexValue::block_sizes() const {
  std::vector<Eigen::Index> s;
  s.reserve(blocks_.size());
  for (const auto& b : blocks_) s.push_back(b.dim());
  return s;
}

Eigen::Index ConvexValue::dim() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks_) n += b.dim();
  return n;
}

const std::vector<Vector>& ConvexValue::hull_points() const {
  if (!single_block()) throw InvalidInput("hull_points: value is a product of blocks");
  return blocks_.front().points;
}

double ConvexValue::radius() const {
  if (!single_block()) throw InvalidInput("radius: value is a product of blocks");
  return blocks_.front().radius;
}

Vector ConvexValue::barycenter() const {
  Vector out(dim());
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    out.segment(off, b.dim()) = b.barycenter();
    off += b.dim();
  }
  return out;
}

Vector ConvexValue::project(const Vector& y) const {
  require_dim(y, dim(), "value projection");
  Vector out(y.size());
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    out.segment(off, b.dim()) = b.project(y.segment(off, b.dim()));
    off += b.dim();
  }
  return out;
}

double ConvexValue::distance(const Vector& y) const {
  require_dim(y, dim(), "value distance");
  double sq = 0.0;
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    const double d = b.distance(y.segment(off, b.dim()));
    sq += d * d;
    off += b.dim();
  }
  return std::sqrt(sq);
}

bool ConvexValue::contains(const Vector& y, double tol) const { return distance(y) <= tol; }

double ConvexValue::support(const Vector& d) const {
  require_dim(d, dim(), "support");
  double s = 0.0;
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    const auto dd = d.segment(off, b.dim());
    double best = -INFINITY;
    for (const auto& p : b.points) best = std::max(best, dd.dot(p));
    s += best + b.radius * dd.norm();
    off += b.dim();
  }
  return s;
}

double ConvexValue::max_norm() const {
  double sq = 0.0;
  for (const auto& b : blocks_) {
    double m = 0.0;
    for (const auto& p : b.points) m = std::max(m, p.norm());
    sq += (m + b.radius) * (m + b.radius);
  }
  return std::sqrt(sq);
}

// --------------------------------------------------------------- SetValuedMap

SetValuedMap SetValuedMap::from_evaluator(Eigen::Index dim, int generator_count, Evaluator eval, double growth_c,
                                          bool single_valued, std::string name) {
  if (dim < 1) throw InvalidInput("set-valued map: dimension must be positive");
  if (generator_count < 1) throw InvalidInput("set-valued map: needs at least one generator");
  if (!(growth_c > 0.0)) throw InvalidInput("set-valued map: growth constant must be positive");
  SetValuedMap m;
  m.dim_ = dim;
  m.generator_count_ = generator_count;
  m.growth_c_ = growth_c;
  m.single_valued_ = single_valued;
  m.name_ = std::move(name);
  m.eval_ = std::move(eval);
  return m;
}

SetValuedMap SetValuedMap::from_generators(Eigen::Index dim, std::vector<Generator> generators, RadiusFunction radius,
                                           double growth_c, std::string name) {
  if (generators.empty()) throw InvalidInput("set-valued map: needs at least one generator");
  const int m = static_cast<int>(generators.size());
  const bool single = m == 1 && !radius;
  auto eval = [gens = std::move(generators), radius = std::move(radius)](double t, const Vector& x) {
    std::vector<Vector> pts;
    pts.reserve(gens.size());
    for (const auto& g : gens) pts.push_back(g(t, x));
    const double r = radius ? radius(t, x) : 0.0;
    return ConvexValue(std::move(pts), r);
  };
  return from_evaluator(dim, m, std::move(eval), growth_c, single, std::move(name));
}

SetValuedMap SetValuedMap::single_valued(Eigen::Index dim, Generator f, double growth_c, std::string name) {
  return from_generators(dim, {std::move(f)}, {}, growth_c, std::move(name));
}

ConvexValue SetValuedMap::evaluate(double t, const Vector& x) const {
  require_dim(x, dim_, "evaluate");
  ConvexValue v = eval_(t, x);
  if (v.dim() != dim_) throw NumericalError("evaluate: generator returned wrong dimension");
  return v;
}

// ------------------------------------------------------------------ Nemytskii

SetValuedMap nemytskii(const PointwiseReaction& phi, int grid_dim) {
  if (grid_dim < 1) throw InvalidInput("nemytskii: grid dimension must be positive");
  if (phi.generators.empty()) throw InvalidInput("nemytskii: pointwise map has no generators");
  if (phi.constraint.dim() != phi.pointwise_dim) throw InvalidInput("nemytskii: pointwise constraint dimension mismatch");
  const Eigen::Index n = phi.pointwise_dim;
  const Eigen::Index total = n * grid_dim;
  auto eval = [phi, grid_dim, n](double t, const Vector& u) {
    std::vector<HullBlock> blocks;
    blocks.reserve(static_cast<std::size_t>(grid_dim));
    for (int i = 0; i < grid_dim; ++i) {
      const Vector y = u.segment(i * n, n);
      HullBlock b;
      b.points.reserve(phi.generators.size());
      for (const auto& g : phi.generators) b.points.push_back(g(t, i, y));
      b.radius = phi.radius ? phi.radius(t, i, y) : 0.0;
      blocks.push_back(std::move(b));
    }
    return ConvexValue(std::move(blocks));
  };
  const bool single = phi.generators.size() == 1 && !phi.radius;
  return SetValuedMap::from_evaluator(total, static_cast<int>(phi.generators.size()), std::move(eval), phi.growth_c,
                                      single, "nemytskii(" + phi.name + ")");
}

std::optional<std::string> check_pointwise_tangency(const PointwiseReaction& phi, int grid_dim, int samples,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto& k = phi.constraint;
  for (int s = 0; s < samples; ++s) {
    // Alternate boundary-heavy and interior samples by projecting Gaussian draws.
    Vector y = k.feasible_point();
    for (Eigen::Index j = 0; j < y.size(); ++j) y[j] += (s % 2 == 0 ? 3.0 : 0.5) * normal(rng);
    y = k.project(y);
    const int i = s % grid_dim;
    const double t = static_cast<double>(s % 11) / 10.0;
    std::vector<Vector> pts;
    for (const auto& g : phi.generators) pts.push_back(g(t, i, y));
    const double r = phi.radius ? phi.radius(t, i, y) : 0.0;
    if (!tangency_lp(k.tangent_cone(y), pts, r)) {
      std::ostringstream os;
      os << "pointwise map misses the tangent cone at node " << i << ", y=" << format_vector(y) << ", t=" << t;
      return os.str();
    }
  }
  return std::nullopt;
}

// ------------------------------------------------------------------- hull map

ConvexValue hull_map(const SetValuedMap& f, double t, const Vector& x, int time_samples) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("hull_map: t must lie in [0, 1]");
  if (time_samples < 2) throw InvalidInput("hull_map: need at least two time samples");
  std::vector<HullBlock> blocks;
  for (int k = 0; k < time_samples; ++k) {
    const double s = t * static_cast<double>(k) / static_cast<double>(time_samples - 1);
    const ConvexValue v = f.evaluate(s, x);
    if (blocks.empty()) {
      blocks = v.blocks();
      continue;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& add = v.blocks()[b];
      for (const auto& p : add.points) {
        const bool seen = std::any_of(blocks[b].points.begin(), blocks[b].points.end(),
                                      [&](const Vector& q) { return q == p; });
        if (!seen) blocks[b].points.push_back(p);
      }
      blocks[b].radius = std::max(blocks[b].radius, add.radius);
    }
  }
  return ConvexValue(std::move(blocks));
}

SetValuedMap hull_map_at(const SetValuedMap& f, double t, int time_samples) {
  auto eval = [f, t, time_samples](double, const Vector& x) { return hull_map(f, t, x, time_samples); };
  return SetValuedMap::from_evaluator(f.dim(), f.generator_count() * time_samples, std::move(eval), f.growth_c(),
                                      false, "hull(" + f.name() + ")");
}

SetValuedMap blend(const Generator& f, const SetValuedMap& g, double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw InvalidInput("blend: z must lie in [0, 1]");
  auto eval = [f, g, z](double t, const Vector& x) {
    const Vector base = (1.0 - z) * f(t, x);
    std::vector<HullBlock> blocks = g.evaluate(t, x).blocks();
    Eigen::Index off = 0;
    for (auto& b : blocks) {
      const Eigen::Index n = b.dim();
      for (auto& p : b.points) p = base.segment(off, n) + z * p;
      b.radius *= z;
      off += n;
    }
    return ConvexValue(std::move(blocks));
  };
  return SetValuedMap::from_evaluator(g.dim(), g.generator_count(), std::move(eval), g.growth_c(),
                                      g.is_single_valued() || z == 0.0, "blend");
}

// ------------------------------------------------------------------ selection

SelectionRule SelectionRule::seeded(std::uint64_t seed, int generator_count) {
  if (seed == 0) return barycenter();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  SelectionRule r;
  r.kind = Kind::Weights;
  double total = 0.0;
  for (int j = 0; j < generator_count; ++j) {
    r.weights.push_back(e(rng));
    total += r.weights.back();
  }
  for (double& w : r.weights) w /= total;
  return r;
}

IntersectionPoint nearest_tangent_point(const ConvexValue& value, const TangentCone& cone, const Vector& target) {
  if (cone.full_space()) {
    const Vector p = value.project(target);
    return {p, 0.0, 0};
  }
  const auto sizes = value.block_sizes();
  if (value.blocks().size() > 1 && cone.factors_over(sizes)) {
    // Componentwise solve; blocks untouched by the cone keep the target.
    Vector out(target.size());
    double gap_sq = 0.0;
    int iters = 0;
    Eigen::Index off = 0;
    for (const auto& b : value.blocks()) {
      const Eigen::Index n = b.dim();
      const TangentCone sub = cone.restrict(off, n);
      const Vector goal = target.segment(off, n);
      if (sub.full_space()) {
        out.segment(off, n) = b.project(goal);
      } else {
        const auto r = dykstra(goal, [&](const Vector& y) { return b.project(y); },
                               [&](const Vector& v) { return sub.project(v); });
        out.segment(off, n) = r.point;
        gap_sq += r.gap * r.gap;
        iters = std::max(iters, r.iterations);
      }
      off += n;
    }
    return {out, std::sqrt(gap_sq), iters};
  }
  return dykstra(target, [&](const Vector& y) { return value.project(y); },
                 [&](const Vector& v) { return cone.project(v); });
}

TangentSelection::TangentSelection(SetValuedMap f, ConvexSet k, double alpha, SelectionRule rule)
    : f_(std::move(f)), k_(std::move(k)), alpha_(alpha), rule_(std::move(rule)) {
  if (f_.dim() != k_.dim()) throw InvalidInput("tangent selection: map and set dimensions differ");
  if (!(alpha_ > 0.0)) throw InvalidInput("tangent selection: accuracy alpha must be positive");
}

Vector TangentSelection::target(const ConvexValue& value) const {
  switch (rule_.kind) {
    case SelectionRule::Kind::Barycenter: return value.barycenter();
    case SelectionRule::Kind::Vertex:
    case SelectionRule::Kind::Weights: {
      Vector out(value.dim());
      Eigen::Index off = 0;
      for (const auto& b : value.blocks()) {
        const Eigen::Index n = b.dim();
        const int m = static_cast<int>(b.points.size());
        if (rule_.kind == SelectionRule::Kind::Vertex) {
          out.segment(off, n) = b.points[static_cast<std::size_t>(std::min(rule_.vertex, m - 1))];
        } else {
          Vector acc = Vector::Zero(n);
          double total = 0.0;
          for (int j = 0; j < m; ++j) {
            const double w = j < static_cast<int>(rule_.weights.size()) ? rule_.weights[static_cast<std::size_t>(j)] : 0.0;
            acc += w * b.points[static_cast<std::size_t>(j)];
            total += w;
          }
          out.segment(off, n) = total > 0.0 ? Vector(acc / total) : b.barycenter();
        }
        off += n;
      }
      return out;
    }
  }
  return value.barycenter();
}

Vector TangentSelection::operator()(double t, const Vector& x) const {
  const ConvexValue value = f_.evaluate(t, x);
  const TangentCone cone = k_.tangent_cone(x);
  const Vector goal = target(value);
  const auto r = nearest_tangent_point(value, cone, goal);
  if (r.gap <= 1e-9 * (1.0 + r.point.norm()) || r.gap <= alpha_) return r.point;
  std::ostringstream os;
  os << "tangency violated at t=" << t << ", x=" << format_vector(x) << ": F(t,x) misses T_K(x) by " << r.gap;
  throw TangencyViolation(os.str(), t, x);
}

VectorField TangentSelection::as_field() const {
  return [self = *this](double t, const Vector& x) { return self(t, x); };
}

// ------------------------------------------------------------------ husc probe

std::vector<double> husc_probe(const SetValuedMap& f, double t, const Vector& x, const std::vector<double>& deltas,
                               int random_directions, std::uint64_t seed) {
  const ConvexValue base = f.evaluate(t, x);
  std::vector<double> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (double delta : deltas) {
    std::vector<std::pair<double, Vector>> probes;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      probes.emplace_back(t, x + delta * Vector::Unit(x.size(), i));
      probes.emplace_back(t, x - delta * Vector::Unit(x.size(), i));
    }
    for (int k = 0; k < random_directions; ++k) {
      Vector d(x.size());
      for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
      probes.emplace_back(t, x + delta * d / d.norm());
    }
    probes.emplace_back(std::clamp(t + delta, 0.0, 1.0), x);
    probes.emplace_back(std::clamp(t - delta, 0.0, 1.0), x);
    double excess = 0.0;
    for (const auto& [s, y] : probes) {
      const ConvexValue v = f.evaluate(s, y);
      // Excess of v over base; exact when v has no ball part, an upper bound otherwise.
      double sq = 0.0;
      for (std::size_t b = 0; b < v.blocks().size(); ++b) {
        const auto& vb = v.blocks()[b];
        const auto& bb = base.blocks()[b];
        double worst = 0.0;
        for (const auto& p : vb.points) worst = std::max(worst, bb.distance(p) + vb.radius);
        sq += worst * worst;
      }
      excess = std::max(excess, std::sqrt(sq));
    }
    out.push_back(excess);
  }
  return out;
}

double growth_ratio(const SetValuedMap& f, int samples, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> box(-radius, radius);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x(f.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = box(rng);
    const double t = unit(rng);
    worst = std::max(worst, f.evaluate(t, x).max_norm() / (f.growth_c() * (1.0 + x.norm())));
  }
  return worst;
}

// -------------------------------------------------------------------- presets

namespace presets {

SetValuedMap zero(Eigen::Index dim) {
  return SetValuedMap::single_valued(dim, [dim](double, const Vector&) { return Vector::Zero(dim); }, 1.0, "zero");
}

SetValuedMap linear(const Matrix& b, const Vector& c) {
  if (b.rows() != b.cols() || b.rows() != c.size()) throw InvalidInput("linear map: matrix/offset shape mismatch");
  const double growth = std::max({1e-12, b.operatorNorm(), c.norm()});
  return SetValuedMap::single_valued(
      c.size(), [b, c](double, const Vector& x) { return Vector(b * x + c); }, growth, "linear");
}

SetValuedMap interval(Eigen::Index dim, double lo, double hi) {
  if (!(lo <= hi)) throw InvalidInput("interval: lo must not exceed hi");
  PointwiseReaction phi;
  phi.generators = {[lo](double, int, const Vector&) { return Vector::Constant(1, lo); },
                    [hi](double, int, const Vector&) { return Vector::Constant(1, hi); }};
  phi.growth_c = std::max({1e-12, std::abs(lo), std::abs(hi)});
  phi.name = "interval";
  SetValuedMap m = nemytskii(phi, static_cast<int>(dim));
  return m;
}

SetValuedMap constant_set(const std::vector<Vector>& points, double radius) {
  if (points.empty()) throw InvalidInput("constant_set: no points");
  double growth = radius;
  std::vector<Generator> gens;
  for (const auto& p : points) {
    growth = std::max(growth, p.norm() + radius);
    gens.push_back([p](double, const Vector&) { return p; });
  }
  RadiusFunction rad;
  if (radius > 0.0) rad = [radius](double, const Vector&) { return radius; };
  return SetValuedMap::from_generators(points.front().size(), std::move(gens), std::move(rad), std::max(growth, 1e-12),
                                       "constant_set");
}

PointwiseReaction logistic_reaction(double rate) {
  PointwiseReaction phi;
  phi.generators = {[](double, int, const Vector&) { return Vector::Zero(1); },
                    [rate](double, int, const Vector& y) { return Vector::Constant(1, rate * y[0] * (1.0 - y[0])); }};
  phi.constraint = ConvexSet::box(Vector::Zero(1), Vector::Ones(1));
  // |y(1-y)| <= 1 + |y| + |y|^2 is not sublinear; the certificate is for the constraint box.
  phi.growth_c = std::max(1e-12, std::abs(rate));
  phi.name = "logistic_interval";
  return phi;
}

SetValuedMap logistic_interval(int grid_dim, double rate) { return nemytskii(logistic_reaction(rate), grid_dim); }

SetValuedMap regularized_sign(double center) {
  std::vector<Generator> gens = {
      [center](double, const Vector& x) { return Vector::Constant(1, x[0] > center ? 1.0 : -1.0); },
      [center](double, const Vector& x) { return Vector::Constant(1, x[0] < center ? -1.0 : 1.0); }};
  return SetValuedMap::from_generators(1, std::move(gens), {}, 1.0, "regularized_sign");
}

SetValuedMap polynomial(Eigen::Index dim, const std::vector<double>& coefficients) {
  if (coefficients.empty()) throw InvalidInput("polynomial: no coefficients");
  auto eval = [coefficients](double x) {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  // Growth certificate is local: sampled on [-10, 10].
  double growth = 1e-12;
  for (int k = -1000; k <= 1000; ++k) {
    const double x = 0.01 * k;
    growth = std::max(growth, std::abs(eval(x)) / (1.0 + std::abs(x)));
  }
  return SetValuedMap::single_valued(
      dim,
      [eval](double, const Vector& x) {
        Vector out(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = eval(x[i]);
        return out;
      },
      growth * std::sqrt(static_cast<double>(dim)), "polynomial");
}

}  // namespace presets

}  // namespace cdeg
