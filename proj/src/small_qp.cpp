#include "cdeg/small_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cdeg {

PolyhedralProjection project_onto_polyhedron(const Matrix& g, const Vector& b, const Vector& y) {
  const auto m = g.rows();
  const auto n = g.cols();
  require_dim(y, n, "project_onto_polyhedron");
  if (b.size() != m) throw InvalidInput("project_onto_polyhedron: row/rhs mismatch");

  PolyhedralProjection out;
  out.point = y;
  out.multipliers = Vector::Zero(m);
  if (m == 0) return out;

  // Internally constraints read n_i^T x >= c_i with n_i = -g_i, c_i = -b_i.
  Vector x = y;
  std::vector<Eigen::Index> active;
  std::vector<double> u;
  const double scale = 1.0 + y.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  const double tol = 1e-13 * scale;
  const int cap = static_cast<int>(50 * m);

  auto slack = [&](Eigen::Index i) { return b[i] - g.row(i).dot(x); };
  auto dump = [&](const std::string& why) {
    std::ostringstream os;
    os << "polyhedral projection: " << why << " (iterate " << format_vector(x) << ", active rows";
    for (auto a : active) os << ' ' << a;
    os << ')';
    return os.str();
  };

  int iter = 0;
  for (;;) {
    Eigen::Index p = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = slack(i) / std::max(1.0, g.row(i).norm());
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) break;

    const Vector np = -g.row(p).transpose();
    double up = 0.0;
    for (;;) {
      if (++iter > cap) throw NumericalError(dump("iteration cap reached"));
      const auto q = static_cast<Eigen::Index>(active.size());
      Vector r(q);
      Vector z = np;
      if (q > 0) {
        Matrix nmat(n, q);
        for (Eigen::Index j = 0; j < q; ++j) nmat.col(j) = -g.row(active[j]).transpose();
        r = (nmat.transpose() * nmat).ldlt().solve(nmat.transpose() * np);
        z = np - nmat * r;
      }
      double t1 = std::numeric_limits<double>::infinity();
      Eigen::Index drop = -1;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (r[j] > 1e-14 && u[j] / r[j] < t1) {
          t1 = u[j] / r[j];
          drop = j;
        }
      }
      double t2 = std::numeric_limits<double>::infinity();
      const double zz = z.squaredNorm();
      if (zz > 1e-24 * np.squaredNorm()) t2 = -slack(p) / zz;  // -s_p / z^T n_p
      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) throw PreconditionError(dump("constraints are infeasible"));
      if (std::isfinite(t2)) x += t * z;
      for (Eigen::Index j = 0; j < q; ++j) u[j] -= t * r[j];
      up += t;
      if (t == t2) {
        active.push_back(p);
        u.push_back(up);
        break;
      }
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
    }
  }

  // Kuhn-Tucker verification: x - y = sum u_j n_j, u >= 0, feasibility.
  Vector stationarity = x - y;
  for (std::size_t j = 0; j < active.size(); ++j) {
    stationarity += u[j] * g.row(active[j]).transpose();
    out.multipliers[active[j]] = u[j];
  }
  const double kkt_tol = 1e-9 * (scale + out.multipliers.cwiseAbs().sum());
  if (stationarity.norm() > kkt_tol) throw NumericalError(dump("Kuhn-Tucker stationarity check failed"));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (slack(i) < -1e-9 * scale * std::max(1.0, g.row(i).norm())) throw NumericalError(dump("result infeasible"));
  }
  out.point = x;
  out.iterations = iter;
  return out;
}

HullProjection project_onto_hull(const std::vector<Vector>& points, const Vector& y) {
  if (points.empty()) throw InvalidInput("project_onto_hull: no points");
  const auto m = points.size();
  std::vector<Vector> p;
  p.reserve(m);
  double scale = 0.0;
  for (const auto& q : points) {
    require_dim(q, y.size(), "project_onto_hull");
    p.push_back(q - y);
    scale = std::max(scale, p.back().squaredNorm());
  }
  HullProjection out;
  out.weights.assign(m, 0.0);
  if (m == 1) {
    out.weights[0] = 1.0;
    out.point = points[0];
    return out;
  }

  std::size_t first = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (p[i].squaredNorm() < p[first].squaredNorm()) first = i;
  }
  std::vector<std::size_t> s{first};
  std::vector<double> lambda{1.0};
  Vector x = p[first];
  const double tol = 1e-15 * std::max(scale, 1e-300);

  for (int major = 0; major < 200 + static_cast<int>(10 * m); ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = p[i].dot(x);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (x.squaredNorm() - best <= 1e-12 * std::max(scale, 1e-300) || x.squaredNorm() <= tol) break;
    if (std::find(s.begin(), s.end(), j) != s.end()) break;
    s.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 100 + static_cast<int>(m); ++minor) {
      const auto q = static_cast<Eigen::Index>(s.size());
      Matrix kkt = Matrix::Zero(q + 1, q + 1);
      for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index c = 0; c < q; ++c) kkt(a, c) = p[s[a]].dot(p[s[c]]);
        kkt(a, q) = 1.0;
        kkt(q, a) = 1.0;
      }
      Vector rhs = Vector::Zero(q + 1);
      rhs[q] = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      bool positive = true;
      for (Eigen::Index a = 0; a < q; ++a) positive = positive && sol[a] > 1e-14;
      if (positive) {
        for (Eigen::Index a = 0; a < q; ++a) lambda[a] = sol[a];
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < q; ++a) {
        if (sol[a] <= 1e-14 && lambda[a] - sol[a] > 0.0) theta = std::min(theta, lambda[a] / (lambda[a] - sol[a]));
      }
      for (Eigen::Index a = 0; a < q; ++a) lambda[a] = (1.0 - theta) * lambda[a] + theta * sol[a];
      std::vector<std::size_t> s2;
      std::vector<double> l2;
      for (Eigen::Index a = 0; a < q; ++a) {
        if (lambda[a] > 1e-14) {
          s2.push_back(s[a]);
          l2.push_back(lambda[a]);
        }
      }
      if (s2.empty()) {
        s2.push_back(s.back());
        l2.push_back(1.0);
      }
      s = std::move(s2);
      lambda = std::move(l2);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    x.setZero();
    for (std::size_t a = 0; a < s.size(); ++a) {
      lambda[a] /= total;
      x += lambda[a] * p[s[a]];
    }
  }
  for (std::size_t a = 0; a < s.size(); ++a) out.weights[s[a]] += lambda[a];
  out.point = x + y;
  return out;
}

}  // namespace cdeg

namespace cdeg {

IntersectionPoint dykstra(const Vector& target, const std::function<Vector(const Vector&)>& project_first,
                          const std::function<Vector(const Vector&)>& project_second, int max_iterations) {
  Vector x = target;
  Vector p = Vector::Zero(target.size());
  Vector q = Vector::Zero(target.size());
  Vector y = x;
  int k = 0;
  for (; k < max_iterations; ++k) {
    y = project_first(x + p);
    p = x + p - y;
    const Vector xn = project_second(y + q);
    q = y + q - xn;
    const double change = (xn - x).norm();
    x = xn;
    if (change <= 1e-15 * (1.0 + x.norm()) && k > 0) break;
  }
  const double gap = (project_first(x) - x).norm();
  return {x, gap, k + 1};
}

}  // namespace cdeg
