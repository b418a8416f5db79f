#include "cdeg/region.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace cdeg {

namespace {

// Two outward triangles for the square with corners p00, p10, p11, p01
// (counter-clockwise seen from the outside).
void push_square(std::vector<std::array<int, 3>>& tris, int p00, int p10, int p11, int p01, bool flip) {
  if (!flip) {
    tris.push_back({p00, p10, p11});
    tris.push_back({p00, p11, p01});
  } else {
    tris.push_back({p00, p11, p10});
    tris.push_back({p00, p01, p11});
  }
}

}  // namespace

BoundaryChain cell_region_boundary(const Vector& lo, const Vector& hi, const std::vector<int>& cells,
                                   const std::function<bool(const Vector&)>& member) {
  const int d = static_cast<int>(lo.size());
  if (d < 1 || d > 3 || static_cast<int>(cells.size()) != d) throw InvalidInput("cell region: dimension must be 1, 2 or 3");
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> step{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    n[static_cast<std::size_t>(a)] = cells[static_cast<std::size_t>(a)];
    step[static_cast<std::size_t>(a)] = (hi[a] - lo[a]) / cells[static_cast<std::size_t>(a)];
  }
  const auto cell_index = [&](int i, int j, int k) { return (static_cast<long>(k) * n[1] + j) * n[0] + i; };
  std::vector<char> in(static_cast<std::size_t>(n[0]) * n[1] * n[2], 0);
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        Vector c(d);
        const std::array<int, 3> idx{i, j, k};
        for (int a = 0; a < d; ++a) c[a] = lo[a] + (idx[static_cast<std::size_t>(a)] + 0.5) * step[static_cast<std::size_t>(a)];
        in[static_cast<std::size_t>(cell_index(i, j, k))] = member(c) ? 1 : 0;
      }
    }
  }
  const auto inside = [&](int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i >= n[0] || j >= n[1] || k >= n[2]) return false;
    return in[static_cast<std::size_t>(cell_index(i, j, k))] != 0;
  };

  BoundaryChain chain;
  chain.dim = d;
  double diag = 0.0;
  for (int a = 0; a < d; ++a) diag += step[static_cast<std::size_t>(a)] * step[static_cast<std::size_t>(a)];
  chain.mesh_size = std::sqrt(diag);
  std::map<long, int> node_of;
  const auto node = [&](int i, int j, int k) {
    const long key = (static_cast<long>(k) * (n[1] + 1) + j) * (n[0] + 1) + i;
    auto it = node_of.find(key);
    if (it != node_of.end()) return it->second;
    Vector p(d);
    const std::array<int, 3> idx{i, j, k};
    for (int a = 0; a < d; ++a) p[a] = lo[a] + idx[static_cast<std::size_t>(a)] * step[static_cast<std::size_t>(a)];
    chain.nodes.push_back(p);
    const int id = static_cast<int>(chain.nodes.size()) - 1;
    node_of.emplace(key, id);
    return id;
  };

  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        if (!inside(i, j, k)) continue;
        if (d == 1) {
          if (!inside(i - 1, 0, 0)) chain.points.emplace_back(node(i, 0, 0), -1);
          if (!inside(i + 1, 0, 0)) chain.points.emplace_back(node(i + 1, 0, 0), +1);
        } else if (d == 2) {
          if (!inside(i, j - 1, 0)) chain.segments.push_back({node(i, j, 0), node(i + 1, j, 0)});
          if (!inside(i + 1, j, 0)) chain.segments.push_back({node(i + 1, j, 0), node(i + 1, j + 1, 0)});
          if (!inside(i, j + 1, 0)) chain.segments.push_back({node(i + 1, j + 1, 0), node(i, j + 1, 0)});
          if (!inside(i - 1, j, 0)) chain.segments.push_back({node(i, j + 1, 0), node(i, j, 0)});
        } else {
          // Faces normal to x: square spanned by (y, z); e_y x e_z = e_x.
          if (!inside(i + 1, j, k))
            push_square(chain.triangles, node(i + 1, j, k), node(i + 1, j + 1, k), node(i + 1, j + 1, k + 1),
                        node(i + 1, j, k + 1), false);
          if (!inside(i - 1, j, k))
            push_square(chain.triangles, node(i, j, k), node(i, j + 1, k), node(i, j + 1, k + 1), node(i, j, k + 1),
                        true);
          // Normal to y: spanned by (z, x); e_z x e_x = e_y.
          if (!inside(i, j + 1, k))
            push_square(chain.triangles, node(i, j + 1, k), node(i, j + 1, k + 1), node(i + 1, j + 1, k + 1),
                        node(i + 1, j + 1, k), false);
          if (!inside(i, j - 1, k))
            push_square(chain.triangles, node(i, j, k), node(i, j, k + 1), node(i + 1, j, k + 1), node(i + 1, j, k),
                        true);
          // Normal to z: spanned by (x, y).
          if (!inside(i, j, k + 1))
            push_square(chain.triangles, node(i, j, k + 1), node(i + 1, j, k + 1), node(i + 1, j + 1, k + 1),
                        node(i, j + 1, k + 1), false);
          if (!inside(i, j, k - 1))
            push_square(chain.triangles, node(i, j, k), node(i + 1, j, k), node(i + 1, j + 1, k), node(i, j + 1, k),
                        true);
        }
      }
    }
  }
  return chain;
}

// ----------------------------------------------------------------- OpenRegion

OpenRegion OpenRegion::ball(ConvexSet ambient, Vector center, double radius, int mesh_level) {
  require_dim(center, ambient.dim(), "region center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("region: radius must be positive");
  if (ambient.dim() > 3) throw InvalidInput("region: degree computations are limited to dimension <= 3");
  OpenRegion r(std::move(ambient));
  r.shape_ = Shape::Ball;
  r.center_ = std::move(center);
  r.radius_ = radius;
  r.mesh_level_ = mesh_level;
  if (r.ambient_.distance(r.center_) >= radius) throw InvalidInput("region: ball does not meet K");
  return r;
}

OpenRegion OpenRegion::box(ConvexSet ambient, Vector lo, Vector hi, int mesh_level) {
  require_dim(lo, ambient.dim(), "region lo");
  require_dim(hi, ambient.dim(), "region hi");
  if (!lo.allFinite() || !hi.allFinite()) throw InvalidInput("region: box must be bounded");
  if (!((hi - lo).array() > 0.0).all()) throw InvalidInput("region: box needs lo < hi");
  if (ambient.dim() > 3) throw InvalidInput("region: degree computations are limited to dimension <= 3");
  OpenRegion r(std::move(ambient));
  r.shape_ = Shape::Box;
  r.lo_ = std::move(lo);
  r.hi_ = std::move(hi);
  r.mesh_level_ = mesh_level;
  return r;
}

bool OpenRegion::in_shape(const Vector& x) const {
  if (shape_ == Shape::Ball) return (x - center_).norm() < radius_;
  return ((x - lo_).array() > 0.0).all() && ((hi_ - x).array() > 0.0).all();
}

bool OpenRegion::contains(const Vector& x) const { return in_shape(x) && ambient_.contains(x, 1e-12); }

double OpenRegion::diameter() const { return shape_ == Shape::Ball ? 2.0 * radius_ : (hi_ - lo_).norm(); }

Vector OpenRegion::bbox_lo() const { return shape_ == Shape::Ball ? Vector(center_.array() - radius_) : lo_; }

Vector OpenRegion::bbox_hi() const { return shape_ == Shape::Ball ? Vector(center_.array() + radius_) : hi_; }

bool OpenRegion::inside_ambient_interior() const {
  if (shape_ == Shape::Ball) return ambient_.interior_depth(center_) > radius_;
  const int d = static_cast<int>(dim());
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vector corner(d);
    for (int a = 0; a < d; ++a) corner[a] = (mask >> a) & 1 ? hi_[a] : lo_[a];
    if (!(ambient_.interior_depth(corner) > 0.0)) return false;
  }
  return true;
}

BoundaryChain OpenRegion::shape_boundary(int level) const {
  const int d = static_cast<int>(dim());
  const int scale = 1 << std::max(0, level + mesh_level_);
  BoundaryChain chain;
  chain.dim = d;
  if (d == 1) {
    const Vector a = bbox_lo();
    const Vector b = bbox_hi();
    chain.nodes = {a, b};
    chain.points = {{0, -1}, {1, +1}};
    return chain;
  }
  if (d == 2) {
    if (shape_ == Shape::Ball) {
      const int n = 32 * scale;
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        Vector p(2);
        p << center_[0] + radius_ * std::cos(th), center_[1] + radius_ * std::sin(th);
        chain.nodes.push_back(p);
      }
      chain.mesh_size = 2.0 * std::numbers::pi * radius_ / n;
    } else {
      const int n = 8 * scale;
      const std::array<std::array<double, 2>, 4> corners{{{lo_[0], lo_[1]}, {hi_[0], lo_[1]}, {hi_[0], hi_[1]}, {lo_[0], hi_[1]}}};
      for (int side = 0; side < 4; ++side) {
        const auto& a = corners[static_cast<std::size_t>(side)];
        const auto& b = corners[static_cast<std::size_t>((side + 1) % 4)];
        for (int k = 0; k < n; ++k) {
          const double s = static_cast<double>(k) / n;
          Vector p(2);
          p << a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]);
          chain.nodes.push_back(p);
        }
      }
      chain.mesh_size = (hi_ - lo_).maxCoeff() / n;
    }
    const int count = static_cast<int>(chain.nodes.size());
    for (int k = 0; k < count; ++k) chain.segments.push_back({k, (k + 1) % count});
    return chain;
  }
  // d == 3: subdivided cube surface, mapped onto the box or radially onto the sphere.
  const int n = 4 * scale;
  BoundaryChain cube = cell_region_boundary(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0), {n, n, n},
                                            [](const Vector&) { return true; });
  for (auto& p : cube.nodes) {
    if (shape_ == Shape::Ball) {
      p = center_ + radius_ * p / p.norm();
    } else {
      p = lo_ + 0.5 * (p.array() + 1.0).matrix().cwiseProduct(hi_ - lo_);
    }
  }
  cube.mesh_size = shape_ == Shape::Ball ? 2.0 * radius_ / n * std::sqrt(2.0) : (hi_ - lo_).norm() / n;
  return cube;
}

std::vector<Vector> OpenRegion::relative_boundary_nodes(int level) const {
  const BoundaryChain c = shape_boundary(level);
  std::vector<Vector> out;
  for (const auto& p : c.nodes) {
    if (ambient_.contains(p, 1e-12)) out.push_back(p);
  }
  return out;
}

std::vector<Vector> OpenRegion::interior_grid(int per_axis) const {
  const int d = static_cast<int>(dim());
  const Vector a = bbox_lo();
  const Vector b = bbox_hi();
  std::vector<Vector> out;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    Vector p(d);
    for (int i = 0; i < d; ++i) {
      const long k = rest % per_axis;
      rest /= per_axis;
      p[i] = a[i] + (k + 0.5) * (b[i] - a[i]) / per_axis;
    }
    if (contains(p)) out.push_back(p);
  }
  return out;
}

}  // namespace cdeg
