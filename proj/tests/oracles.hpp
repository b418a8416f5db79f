#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library.

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// exp(tA) by Taylor series with scaling and squaring.
inline Mat taylor_expm(const Mat& a, double t) {
  Mat m = a * t;
  int squarings = 0;
  double norm = m.lpNorm<1>();
  while (norm > 0.25) {
    m /= 2.0;
    norm /= 2.0;
    ++squarings;
  }
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * m / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// (I - hA)^{-1} x by a full-pivot solve.
inline Vec resolvent(const Mat& a, double h, const Vec& x) {
  return (Mat::Identity(a.rows(), a.cols()) - h * a).fullPivLu().solve(x);
}

// Composite Simpson rule for s -> exp((t - s)A) w over [s0, s1].
inline Vec duhamel_segment(const Mat& a, double t, double s0, double s1, const Vec& w, int panels = 400) {
  const double step = (s1 - s0) / panels;
  Vec acc = Vec::Zero(a.rows());
  for (int i = 0; i <= panels; ++i) {
    const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += weight * (taylor_expm(a, t - (s0 + i * step)) * w);
  }
  return acc * step / 3.0;
}

inline Mat random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  }
  return 0.5 * (m + m.transpose());
}

inline Vec random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

// Least-squares slope of log(err) against log(h).
template <class Range>
double loglog_slope(const Range& hs, const Range& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// d(x; [lo, hi]) for a box with possibly infinite bounds.
inline double box_distance(const Vec& x, const Vec& lo, const Vec& hi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double d = x[i] < lo[i] ? lo[i] - x[i] : (x[i] > hi[i] ? x[i] - hi[i] : 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

// Brute-force distance to a polyhedron {Gx <= b} in the plane: minimum over
// the feasible point itself, edge projections and vertices.
inline double polygon_distance(const Mat& g, const Vec& b, const Vec& y) {
  auto feasible = [&](const Vec& p) { return ((g * p - b).array() <= 1e-12).all(); };
  if (feasible(y)) return 0.0;
  double best = INFINITY;
  const auto m = g.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Vec a = g.row(i).transpose();
    const Vec p = y - (a.dot(y) - b[i]) / a.squaredNorm() * a;
    if (feasible(p)) best = std::min(best, (p - y).norm());
    for (Eigen::Index j = i + 1; j < m; ++j) {
      Eigen::Matrix2d s;
      s << g.row(i), g.row(j);
      if (std::abs(s.determinant()) < 1e-14) continue;
      const Vec v = s.inverse() * Eigen::Vector2d(b[i], b[j]);
      if (feasible(v)) best = std::min(best, (v - y).norm());
    }
  }
  return best;
}

}  // namespace oracle
