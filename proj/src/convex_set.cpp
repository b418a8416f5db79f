#include "cdeg/convex_set.hpp"

#include "cdeg/small_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdeg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double default_activity_tol(const Vector& x) { return 1e-9 * (1.0 + x.norm()); }

}  // namespace

// ---------------------------------------------------------------- TangentCone

TangentCone::TangentCone(Vector base_point, Matrix rows) : base_(std::move(base_point)), rows_(std::move(rows)) {
  if (rows_.rows() > 0 && rows_.cols() != base_.size()) throw InvalidInput("tangent cone: row dimension mismatch");
  if (rows_.rows() == 0) rows_.resize(0, base_.size());
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    const double nrm = rows_.row(i).norm();
    if (!(nrm > 0.0)) throw InvalidInput("tangent cone: zero constraint row");
    rows_.row(i) /= nrm;
    Eigen::Index nonzeros = 0;
    for (Eigen::Index j = 0; j < rows_.cols(); ++j) nonzeros += rows_(i, j) != 0.0;
    coordinate_rows_ = coordinate_rows_ && nonzeros == 1;
  }
}

double TangentCone::violation(const Vector& v) const {
  require_dim(v, dim(), "tangent cone");
  if (full_space()) return 0.0;
  return std::max(0.0, (rows_ * v).maxCoeff());
}

bool TangentCone::contains(const Vector& v, double tol) const { return violation(v) <= tol; }

Vector TangentCone::project(const Vector& v) const {
  require_dim(v, dim(), "tangent cone");
  if (full_space()) return v;
  if (coordinate_rows_) {
    Vector out = v;
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      Eigen::Index j = 0;
      rows_.row(i).cwiseAbs().maxCoeff(&j);
      if (rows_(i, j) > 0.0) {
        out[j] = std::min(out[j], 0.0);
      } else {
        out[j] = std::max(out[j], 0.0);
      }
    }
    return out;
  }
  return project_onto_polyhedron(rows_, Vector::Zero(rows_.rows()), v).point;
}

TangentCone TangentCone::restrict(Eigen::Index offset, Eigen::Index len) const {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    const double inside = rows_.row(i).segment(offset, len).norm();
    if (inside > 0.0) keep.push_back(i);
  }
  Matrix sub(static_cast<Eigen::Index>(keep.size()), len);
  for (std::size_t k = 0; k < keep.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = rows_.row(keep[k]).segment(offset, len);
  return TangentCone(base_.segment(offset, len), sub);
}

bool TangentCone::factors_over(const std::vector<Eigen::Index>& block_sizes) const {
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    Eigen::Index offset = 0;
    int touched = 0;
    for (auto len : block_sizes) {
      if (rows_.row(i).segment(offset, len).cwiseAbs().maxCoeff() > 0.0) ++touched;
      offset += len;
    }
    if (touched > 1) return false;
  }
  return true;
}

// ------------------------------------------------------------------ ConvexSet

ConvexSet ConvexSet::box(Vector lo, Vector hi) {
  if (lo.size() == 0 || lo.size() != hi.size()) throw InvalidInput("box: lo/hi must be nonempty and of equal length");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i])) throw InvalidInput("box: NaN bound");
    if (lo[i] > hi[i]) throw InvalidInput("box: lo > hi in coordinate " + std::to_string(i));
    if (lo[i] == kInf || hi[i] == -kInf) throw InvalidInput("box: empty coordinate " + std::to_string(i));
  }
  ConvexSet s;
  s.kind_ = Kind::Box;
  s.dim_ = lo.size();
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  s.feasible_ = s.project(Vector::Zero(s.dim_));
  return s;
}

ConvexSet ConvexSet::whole_space(int n) {
  return box(Vector::Constant(n, -kInf), Vector::Constant(n, kInf));
}

ConvexSet ConvexSet::halfspaces(Matrix a, Vector b) {
  if (a.rows() == 0 || a.cols() == 0 || a.rows() != b.size()) throw InvalidInput("halfspaces: need m x N normals and m offsets");
  if (!a.allFinite() || !b.allFinite()) throw InvalidInput("halfspaces: non-finite data");
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a.row(i).norm() == 0.0) throw InvalidInput("halfspaces: zero normal in row " + std::to_string(i));
  }
  ConvexSet s;
  s.kind_ = Kind::Halfspaces;
  s.dim_ = a.cols();
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  try {
    s.feasible_ = project_onto_polyhedron(s.a_, s.b_, Vector::Zero(s.dim_)).point;
  } catch (const PreconditionError&) {
    throw InvalidInput("halfspaces: the intersection is empty");
  }
  return s;
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0 || !center.allFinite()) throw InvalidInput("ball: invalid center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball: radius must be positive");
  ConvexSet s;
  s.kind_ = Kind::Ball;
  s.dim_ = center.size();
  s.center_ = std::move(center);
  s.radius_ = radius;
  s.feasible_ = s.center_;
  return s;
}

ConvexSet ConvexSet::product(std::vector<ConvexSet> factors) {
  if (factors.empty()) throw InvalidInput("product: no factors");
  ConvexSet s;
  s.kind_ = Kind::Product;
  for (const auto& f : factors) s.dim_ += f.dim();
  s.feasible_.resize(s.dim_);
  Eigen::Index off = 0;
  for (const auto& f : factors) {
    s.feasible_.segment(off, f.dim()) = f.feasible_point();
    off += f.dim();
  }
  s.factors_ = std::move(factors);
  return s;
}

std::string ConvexSet::kind_name() const {
  switch (kind_) {
    case Kind::Box: return "box";
    case Kind::Halfspaces: return "halfspaces";
    case Kind::Ball: return "ball";
    case Kind::Product: return "product";
  }
  return "?";
}

Vector ConvexSet::project(const Vector& y) const {
  require_dim(y, dim_, "project");
  require_finite(y, "project");
  switch (kind_) {
    case Kind::Box: return y.cwiseMax(lo_).cwiseMin(hi_);
    case Kind::Halfspaces: return project_onto_polyhedron(a_, b_, y).point;
    case Kind::Ball: {
      const Vector d = y - center_;
      const double n = d.norm();
      if (n <= radius_) return y;
      return center_ + (radius_ / n) * d;
    }
    case Kind::Product: {
      Vector out(dim_);
      Eigen::Index off = 0;
      for (const auto& f : factors_) {
        out.segment(off, f.dim()) = f.project(y.segment(off, f.dim()));
        off += f.dim();
      }
      return out;
    }
  }
  return y;
}

double ConvexSet::distance(const Vector& y) const { return (y - project(y)).norm(); }

bool ConvexSet::contains(const Vector& x, double tol) const {
  require_dim(x, dim_, "contains");
  if (kind_ == Kind::Box && tol == 0.0) {
    return ((x - lo_).array() >= 0.0).all() && ((hi_ - x).array() >= 0.0).all();
  }
  return distance(x) <= tol;
}

double ConvexSet::interior_depth(const Vector& x) const {
  require_dim(x, dim_, "interior_depth");
  const double outside = distance(x);
  if (outside > 0.0) return -outside;
  switch (kind_) {
    case Kind::Box: {
      double depth = kInf;
      for (Eigen::Index i = 0; i < dim_; ++i) depth = std::min({depth, x[i] - lo_[i], hi_[i] - x[i]});
      return depth;
    }
    case Kind::Halfspaces: {
      double depth = kInf;
      for (Eigen::Index i = 0; i < a_.rows(); ++i) depth = std::min(depth, (b_[i] - a_.row(i).dot(x)) / a_.row(i).norm());
      return depth;
    }
    case Kind::Ball: return radius_ - (x - center_).norm();
    case Kind::Product: {
      double depth = kInf;
      Eigen::Index off = 0;
      for (const auto& f : factors_) {
        depth = std::min(depth, f.interior_depth(x.segment(off, f.dim())));
        off += f.dim();
      }
      return depth;
    }
  }
  return 0.0;
}

double ConvexSet::variational_residual(const Vector& y, const Vector& k) const {
  require_dim(k, dim_, "variational_residual");
  if (!contains(k, 1e-9 * (1.0 + k.norm()))) throw PreconditionError("variational_residual: k is not in K");
  const Vector r = project(y);
  return (k - r).dot(y - r);
}

void ConvexSet::append_active_rows(const Vector& x, double tol, std::vector<Vector>& rows, Eigen::Index offset,
                                   Eigen::Index total) const {
  auto push = [&](const Vector& local) {
    Vector row = Vector::Zero(total);
    row.segment(offset, dim_) = local;
    rows.push_back(std::move(row));
  };
  switch (kind_) {
    case Kind::Box:
      for (Eigen::Index i = 0; i < dim_; ++i) {
        if (std::isfinite(lo_[i]) && x[i] - lo_[i] <= tol) push(-Vector::Unit(dim_, i));
        if (std::isfinite(hi_[i]) && hi_[i] - x[i] <= tol) push(Vector::Unit(dim_, i));
      }
      break;
    case Kind::Halfspaces:
      for (Eigen::Index i = 0; i < a_.rows(); ++i) {
        const double nrm = a_.row(i).norm();
        if (b_[i] - a_.row(i).dot(x) <= tol * nrm) push(a_.row(i).transpose() / nrm);
      }
      break;
    case Kind::Ball: {
      const Vector d = x - center_;
      if (radius_ - d.norm() <= tol) push(d / d.norm());
      break;
    }
    case Kind::Product: {
      Eigen::Index off = 0;
      for (const auto& f : factors_) {
        f.append_active_rows(x.segment(off, f.dim()), tol, rows, offset + off, total);
        off += f.dim();
      }
      break;
    }
  }
}

TangentCone ConvexSet::tangent_cone(const Vector& x, std::optional<double> activity_tol) const {
  require_dim(x, dim_, "tangent_cone");
  const double tol = activity_tol.value_or(default_activity_tol(x));
  const double d = distance(x);
  if (d > tol) throw PreconditionError("tangent_cone: base point is at distance " + std::to_string(d) + " from K");
  std::vector<Vector> rows;
  append_active_rows(x, tol, rows, 0, dim_);
  Matrix m(static_cast<Eigen::Index>(rows.size()), dim_);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return TangentCone(x, m);
}

// ---------------------------------------------------------------- tangency_lp

std::optional<Vector> tangency_lp(const TangentCone& cone, const std::vector<Vector>& hull_points, double radius,
                                  std::optional<Vector> target) {
  if (hull_points.empty()) throw InvalidInput("tangency_lp: empty hull");
  if (!(radius >= 0.0)) throw InvalidInput("tangency_lp: negative radius");
  Vector bary = Vector::Zero(cone.dim());
  for (const auto& p : hull_points) {
    require_dim(p, cone.dim(), "tangency_lp");
    bary += p;
  }
  bary /= static_cast<double>(hull_points.size());
  const Vector goal = target.value_or(bary);

  auto onto_value = [&](const Vector& y) -> Vector {
    const Vector p = project_onto_hull(hull_points, y).point;
    const double d = (y - p).norm();
    if (d <= radius) return y;
    return p + (radius / d) * (y - p);
  };
  if (cone.full_space()) return onto_value(goal);
  const auto res = dykstra(goal, onto_value, [&](const Vector& v) { return cone.project(v); });
  if (res.gap > 1e-9 * (1.0 + res.point.norm())) return std::nullopt;
  return res.point;
}

}  // namespace cdeg
