#include "cdeg/degree.hpp"

#include "cdeg/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace cdeg {

namespace {

constexpr double kPi = std::numbers::pi;

class ChainEvaluator {
 public:
  ChainEvaluator(const PointMap& map, const BoundaryChain& chain, const DegreeOptions& opt)
      : map_(map), chain_(chain), opt_(opt), cache_(chain.nodes.size()) {}

  Vector node(int i) {
    auto& slot = cache_[static_cast<std::size_t>(i)];
    if (!slot) slot = eval(chain_.nodes[static_cast<std::size_t>(i)]);
    return *slot;
  }

  Vector eval(const Vector& p) {
    Vector v = map_(p);
    ++result.evaluations;
    if (v.size() != chain_.dim) throw InvalidInput("degree: map output dimension differs from the region dimension");
    if (!v.allFinite()) throw NumericalError("degree: map value is not finite at " + format_vector(p));
    const double r = v.norm();
    if (r < result.min_residual) {
      result.min_residual = r;
      result.argmin = p;
    }
    if (r <= opt_.tol) {
      std::ostringstream os;
      os << "zero on boundary: |map| = " << r << " at " << format_vector(p);
      throw ZeroOnBoundary(os.str(), p, r);
    }
    return v;
  }

  // Angle swept by the image of segment [pa, pb].
  double segment(const Vector& pa, const Vector& pb, const Vector& fa, const Vector& fb, int depth) {
    const double cross = fa[0] * fb[1] - fa[1] * fb[0];
    const double dot = fa.dot(fb);
    const double angle = std::atan2(cross, dot);
    if (std::abs(angle) < kPi / 2) return angle;
    if (depth >= opt_.max_bisection_depth) throw Inconclusive("degree: bisection depth exhausted on a boundary segment");
    const Vector pm = 0.5 * (pa + pb);
    const Vector fm = eval(pm);
    return segment(pa, pm, fa, fm, depth + 1) + segment(pm, pb, fm, fb, depth + 1);
  }

  // Signed solid angle of the closed image surface. Triangles are refined
  // adaptively; midpoints are shared across edges and leaves are summed as
  // polygons that include hanging nodes, so the image surface stays closed.
  double surface(const std::vector<std::array<int, 3>>& triangles) {
    for (std::size_t i = 0; i < chain_.nodes.size(); ++i) {
      points_.push_back(chain_.nodes[i]);
      values_.push_back(node(static_cast<int>(i)).normalized());
    }
    struct Item {
      std::array<int, 3> t;
      int depth;
    };
    std::vector<Item> stack;
    for (const auto& t : triangles) stack.push_back({t, 0});
    std::vector<std::array<int, 3>> leaves;
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      const auto& [a, b, c] = it.t;
      if (values_[a].dot(values_[b]) > 0.0 && values_[b].dot(values_[c]) > 0.0 && values_[c].dot(values_[a]) > 0.0) {
        leaves.push_back(it.t);
        continue;
      }
      if (it.depth >= std::min(opt_.max_bisection_depth, 12)) {
        throw Inconclusive("degree: subdivision depth exhausted on a boundary triangle");
      }
      const int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      for (const auto& t : {std::array<int, 3>{a, ab, ca}, std::array<int, 3>{ab, b, bc}, std::array<int, 3>{ca, bc, c},
                            std::array<int, 3>{ab, bc, ca}}) {
        stack.push_back({t, it.depth + 1});
      }
    }
    double total = 0.0;
    std::vector<int> poly;
    for (const auto& [a, b, c] : leaves) {
      poly.clear();
      walk(a, b, poly);
      walk(b, c, poly);
      walk(c, a, poly);
      const Eigen::Vector3d p0 = values_[poly[0]];
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const Eigen::Vector3d p1 = values_[poly[i]];
        const Eigen::Vector3d p2 = values_[poly[i + 1]];
        total += 2.0 * std::atan2(p0.dot(p1.cross(p2)), 1.0 + p0.dot(p1) + p1.dot(p2) + p2.dot(p0));
      }
    }
    return total;
  }

  ChainDegree result{0.0, 0, std::numeric_limits<double>::infinity(), Vector(), 0};

 private:
  const PointMap& map_;
  const BoundaryChain& chain_;
  const DegreeOptions& opt_;
  std::vector<std::optional<Vector>> cache_;
  std::vector<Vector> points_;
  std::vector<Eigen::Vector3d> values_;
  std::map<std::pair<int, int>, int> mid_;

  int midpoint(int a, int b) {
    const auto key = std::minmax(a, b);
    if (auto it = mid_.find(key); it != mid_.end()) return it->second;
    const Vector p = 0.5 * (points_[a] + points_[b]);
    const Eigen::Vector3d v = eval(p).normalized();
    points_.push_back(p);
    values_.push_back(v);
    const int id = static_cast<int>(points_.size()) - 1;
    mid_.emplace(key, id);
    return id;
  }

  // Appends the vertices of edge a->b, hanging nodes included, without b.
  void walk(int a, int b, std::vector<int>& out) const {
    if (auto it = mid_.find(std::minmax(a, b)); it != mid_.end()) {
      walk(a, it->second, out);
      walk(it->second, b, out);
    } else {
      out.push_back(a);
    }
  }
};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::string level_param(int level) { return "mesh_level=" + std::to_string(level); }

}  // namespace

ChainDegree chain_degree(const PointMap& map, const BoundaryChain& chain, const DegreeOptions& opt) {
  ChainEvaluator ev(map, chain, opt);
  const auto& nodes = chain.nodes;
  double total = 0.0;
  double unit = 1.0;
  switch (chain.dim) {
    case 1:
      for (const auto& [node, orientation] : chain.points) total += 0.5 * orientation * sign(ev.node(node)[0]);
      break;
    case 2:
      for (const auto& s : chain.segments) {
        total += ev.segment(nodes[static_cast<std::size_t>(s[0])], nodes[static_cast<std::size_t>(s[1])], ev.node(s[0]),
                            ev.node(s[1]), 0);
      }
      unit = 2.0 * kPi;
      break;
    case 3:
      total = ev.surface(chain.triangles);
      unit = 4.0 * kPi;
      break;
    default: throw InvalidInput("degree: dimension must be 1, 2 or 3");
  }
  ChainDegree out = ev.result;
  out.raw = total / unit;
  out.value = static_cast<int>(std::lround(out.raw));
  if (std::abs(out.raw - out.value) > 1e-6) {
    std::ostringstream os;
    os << "degree: boundary sum " << out.raw << " is not an integer";
    throw Inconclusive(os.str());
  }
  return out;
}

nlohmann::json to_json(const DegreeCertificate& c) {
  nlohmann::json j;
  j["value"] = c.value;
  j["method"] = c.method;
  j["params"] = {{"h", c.h}, {"alpha", c.alpha}, {"mesh_level", c.mesh_level}, {"perturbation", c.perturbation},
                 {"margin", c.margin}};
  j["min_boundary_residual"] = c.min_boundary_residual;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : c.stability) {
    nlohmann::json r;
    r["param"] = s.param;
    r["value"] = s.value ? nlohmann::json(*s.value) : nlohmann::json(nullptr);
    r["min_residual"] = std::isfinite(s.min_residual) ? nlohmann::json(s.min_residual) : nlohmann::json(nullptr);
    if (!s.note.empty()) r["note"] = s.note;
    rows.push_back(r);
  }
  j["stability"] = rows;
  if (c.located_zero) j["located_zero"] = std::vector<double>(c.located_zero->data(), c.located_zero->data() + c.located_zero->size());
  if (c.zero_residual) j["zero_residual"] = *c.zero_residual;
  return j;
}

DegreeCertificate brouwer_degree(const PointMap& map, const OpenRegion& region, const DegreeOptions& opt) {
  DegreeCertificate cert;
  cert.method = "brouwer_boundary_" + std::string(region.dim() == 1 ? "signs" : region.dim() == 2 ? "winding" : "solid_angle");
  cert.min_boundary_residual = std::numeric_limits<double>::infinity();
  std::optional<int> previous;
  for (int level = opt.base_level; level <= opt.max_level; ++level) {
    const ChainDegree d = chain_degree(map, region.shape_boundary(level), opt);
    cert.stability.push_back({level_param(level), d.value, d.min_residual, {}});
    cert.min_boundary_residual = std::min(cert.min_boundary_residual, d.min_residual);
    if (previous && *previous == d.value) {
      cert.value = d.value;
      cert.mesh_level = level;
      return cert;
    }
    previous = d.value;
  }
  throw DegreeInconclusive("brouwer_degree: refinement did not stabilize", cert);
}

DegreeCertificate fixed_point_index(const PointMap& f, const OpenRegion& region, const IndexOptions& opt) {
  const ConvexSet& k = region.ambient();
  const auto& dopt = opt.degree;
  for (const auto& x : region.relative_boundary_nodes(dopt.base_level)) {
    const double r = (x - f(x)).norm();
    if (r <= dopt.tol) {
      std::ostringstream os;
      os << "fixed point on the relative boundary: |x - f(x)| = " << r << " at " << format_vector(x);
      throw ZeroOnBoundary(os.str(), x, r);
    }
  }
  const PointMap residual = [&](const Vector& x) -> Vector { return x - f(k.project(x)); };
  const double diam = region.diameter();
  const Vector lo = region.bbox_lo().array() - opt.margin_factor * diam;
  const Vector hi = region.bbox_hi().array() + opt.margin_factor * diam;
  const int d = static_cast<int>(region.dim());
  const double per_diam = d == 1 ? 64.0 : d == 2 ? 16.0 : 6.0;

  DegreeCertificate cert;
  cert.method = "fixed_point_index(r^-1(U)∩B)";
  cert.margin = opt.margin_factor;
  cert.min_boundary_residual = std::numeric_limits<double>::infinity();
  std::optional<int> previous;
  bool stable = false;
  for (int level = dopt.base_level; level <= dopt.max_level; ++level) {
    std::vector<int> cells;
    for (int a = 0; a < d; ++a) {
      cells.push_back(static_cast<int>(std::ceil((hi[a] - lo[a]) / diam * per_diam)) << (level + region.mesh_level()));
    }
    const BoundaryChain chain =
        cell_region_boundary(lo, hi, cells, [&](const Vector& c) { return region.in_shape(k.project(c)); });
    const ChainDegree deg = chain_degree(residual, chain, dopt);
    cert.stability.push_back({level_param(level), deg.value, deg.min_residual, "cells on r^-1(U)∩B"});
    cert.min_boundary_residual = std::min(cert.min_boundary_residual, deg.min_residual);
    if (previous && *previous == deg.value) {
      cert.value = deg.value;
      cert.mesh_level = level;
      stable = true;
      break;
    }
    previous = deg.value;
  }
  if (!stable) throw DegreeInconclusive("fixed_point_index: refinement did not stabilize", cert);

  if (region.inside_ambient_interior()) {
    const DegreeCertificate direct = brouwer_degree(residual, region, dopt);
    cert.stability.push_back({"direct_on_U", direct.value, direct.min_boundary_residual, "U inside int K"});
    cert.min_boundary_residual = std::min(cert.min_boundary_residual, direct.min_boundary_residual);
    if (direct.value != cert.value) {
      throw DegreeInconclusive("fixed_point_index: index on V and on U disagree", cert);
    }
  }
  return cert;
}

double rhs_boundary_residual(const LinearOperator& op, const SetValuedMap& g, const OpenRegion& region, int level,
                             Vector* where) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : region.relative_boundary_nodes(level)) {
    const Vector ax = op.matrix() * x;
    const double r = g.evaluate(0.0, x).distance(-ax);
    if (r < best) {
      best = r;
      if (where) *where = x;
    }
  }
  return best;
}

ZeroSearch locate_zero(const PointMap& map, const OpenRegion& region, double target) {
  const int d = static_cast<int>(region.dim());
  const ConvexSet& k = region.ambient();
  ZeroSearch best{Vector(), std::numeric_limits<double>::infinity(), false};
  auto consider = [&](const Vector& x, double r) {
    if (r < best.residual) best = {x, r, false};
  };
  if (d == 1) {
    const auto grid = region.interior_grid(400);
    std::vector<double> vals;
    for (const auto& x : grid) {
      vals.push_back(map(x)[0]);
      consider(x, std::abs(vals.back()));
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (sign(vals[i - 1]) * sign(vals[i]) >= 0.0) continue;
      double a = grid[i - 1][0];
      double b = grid[i][0];
      double fa = vals[i - 1];
      for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = map(Vector::Constant(1, m))[0];
        if (sign(fm) == sign(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      const Vector x = Vector::Constant(1, 0.5 * (a + b));
      consider(x, std::abs(map(x)[0]));
    }
  } else {
    auto grid = region.interior_grid(d == 2 ? 40 : 12);
    std::vector<std::pair<double, Vector>> starts;
    for (const auto& x : grid) starts.emplace_back(map(x).norm(), x);
    std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (starts.size() > 8) starts.resize(8);
    for (auto [r0, x] : starts) {
      Vector fx = map(x);
      consider(x, fx.norm());
      for (int it = 0; it < 60 && fx.norm() > target; ++it) {
        Matrix jac(d, d);
        for (int j = 0; j < d; ++j) {
          const double e = 1e-7 * (1.0 + std::abs(x[j]));
          Vector xp = x;
          xp[j] += e;
          jac.col(j) = (map(xp) - fx) / e;
        }
        const Vector dx = jac.colPivHouseholderQr().solve(-fx);
        if (!dx.allFinite()) break;
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls) {
          const Vector xn = k.project(x + lambda * dx);
          const Vector fn = map(xn);
          if (fn.norm() < fx.norm()) {
            x = xn;
            fx = fn;
            improved = true;
            break;
          }
          lambda *= 0.5;
        }
        if (!improved) break;
        consider(x, fx.norm());
      }
    }
  }
  best.found = best.residual <= target;
  return best;
}

DegreeCertificate degree_rhs(const LinearOperator& op, const SetValuedMap& g, const OpenRegion& region,
                             const std::vector<SweepEntry>& sweep, const RhsOptions& opt) {
  const ConvexSet& k = region.ambient();
  if (op.dim() != region.dim() || g.dim() != region.dim()) throw InvalidInput("degree_rhs: dimension mismatch");
  if (sweep.size() < 3) throw InvalidInput("degree_rhs: the sweep needs at least three (alpha, h) entries");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i].alpha > 0.0) || !(sweep[i].h > 0.0)) throw InvalidInput("degree_rhs: alpha and h must be positive");
    if (i > 0 && (sweep[i].h > sweep[i - 1].h || sweep[i].alpha > sweep[i - 1].alpha)) {
      throw InvalidInput("degree_rhs: sweep must be nonincreasing in alpha and h");
    }
  }

  Vector where;
  const double boundary = rhs_boundary_residual(op, g, region, opt.index.degree.base_level + 1, &where);
  if (boundary <= opt.boundary_tol) {
    std::ostringstream os;
    os << "boundary residual failure: dist(0, Ax + G(x)) = " << boundary << " at " << format_vector(where);
    throw ZeroOnBoundary(os.str(), where, boundary);
  }

  DegreeCertificate cert;
  cert.method = "degree_rhs(Ind_K(r∘J_h(I+hg), U))";
  cert.margin = opt.index.margin_factor;
  cert.min_boundary_residual = boundary;
  std::vector<std::optional<int>> values;
  for (const auto& e : sweep) {
    std::ostringstream param;
    param << "alpha=" << e.alpha << ",h=" << e.h;
    try {
      const TangentSelection sel(g, k, e.alpha, SelectionRule::seeded(opt.selection_seed, g.generator_count()));
      const Resolvent jh(op, e.h);
      const PointMap step = [&](const Vector& x) -> Vector { return k.project(jh.apply(x + e.h * sel(0.0, x))); };
      const DegreeCertificate idx = fixed_point_index(step, region, opt.index);
      cert.stability.push_back({param.str(), idx.value, idx.min_boundary_residual, {}});
      cert.mesh_level = idx.mesh_level;
      values.push_back(idx.value);
    } catch (const Error& err) {
      cert.stability.push_back({param.str(), std::nullopt, std::numeric_limits<double>::quiet_NaN(), err.what()});
      values.push_back(std::nullopt);
    }
  }
  const auto n = values.size();
  const bool stable = values[n - 1] && values[n - 2] && values[n - 3] && *values[n - 1] == *values[n - 2] &&
                      *values[n - 2] == *values[n - 3];
  cert.h = sweep.back().h;
  cert.alpha = sweep.back().alpha;
  if (!stable) throw DegreeInconclusive("degree_rhs: the (alpha, h) sweep did not stabilize", cert);
  cert.value = *values.back();

  if (opt.locate_zero && cert.value != 0) {
    const TangentSelection sel(g, k, cert.alpha, SelectionRule::seeded(opt.selection_seed, g.generator_count()));
    const Resolvent jh(op, cert.h);
    const PointMap defect = [&](const Vector& x) -> Vector {
      const Vector y = k.project(x);
      return y - k.project(jh.apply(y + cert.h * sel(0.0, y)));
    };
    const ZeroSearch z = locate_zero(defect, region, 1e-13);
    if (z.x.size() == region.dim()) {
      cert.located_zero = k.project(z.x);
      cert.zero_residual = g.evaluate(0.0, *cert.located_zero).distance(-(op.matrix() * *cert.located_zero));
    }
  }
  return cert;
}

HomotopyDegreeReport degree_homotopy_check(const LinearOperator& op, const MapFamily& h, const OpenRegion& region,
                                           const std::vector<double>& z_samples, const std::vector<SweepEntry>& sweep,
                                           const RhsOptions& opt) {
  HomotopyDegreeReport rep;
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (double z : z_samples) {
    const SetValuedMap g = h(z);
    Vector where;
    const double r = rhs_boundary_residual(op, g, region, opt.index.degree.base_level + 1, &where);
    if (r <= opt.boundary_tol) {
      std::ostringstream os;
      os << "homotopy boundary residual failure at z=" << z << ": dist(0, Ax + H(z,x)) = " << r << " at "
         << format_vector(where);
      throw ZeroOnBoundary(os.str(), where, r);
    }
    RhsOptions o = opt;
    o.locate_zero = false;
    const DegreeCertificate c = degree_rhs(op, g, region, sweep, o);
    rep.z.push_back(z);
    rep.values.push_back(c.value);
    rep.boundary_residuals.push_back(r);
    rep.min_residual = std::min(rep.min_residual, r);
  }
  rep.constant = !rep.values.empty() &&
                 std::all_of(rep.values.begin(), rep.values.end(), [&](int v) { return v == rep.values.front(); });
  return rep;
}

}  // namespace cdeg
