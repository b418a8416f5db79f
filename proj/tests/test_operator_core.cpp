#include "doctest.h"

#include "cdeg/linear_operator.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cdeg;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Matrix rotation() {
  Matrix a(2, 2);
  a << 0, -1, 1, 0;
  return a;
}

}  // namespace

TEST_CASE("construction validates growth metadata") {
  CHECK_THROWS_AS(LinearOperator(Matrix::Identity(2, 2), 0.5, 1.0), InvalidInput);
  CHECK_THROWS_AS(LinearOperator(Matrix::Zero(2, 3), 1.0, 0.0), InvalidInput);
  // symmetric with omega below the top eigenvalue
  CHECK_THROWS_AS(LinearOperator(Matrix::Identity(2, 2), 1.0, 0.5), InvalidInput);
  CHECK_NOTHROW(LinearOperator(Matrix::Identity(2, 2), 1.0, 1.0));
  // rotation: ||S(t)|| = 1, so M = 1, omega = 0 is valid, omega = -1 is not
  CHECK_NOTHROW(LinearOperator(rotation(), 1.0, 0.0));
  CHECK_THROWS_AS(LinearOperator(rotation(), 1.0, -1.0), InvalidInput);
}

TEST_CASE("semigroup_apply examples") {
  CHECK((semigroup_apply(zero_operator(2), 7.3, vec({1, 2})) - vec({1, 2})).norm() == 0.0);
  const LinearOperator decay(-Matrix::Identity(1, 1), 1.0, -1.0);
  CHECK(semigroup_apply(decay, std::log(2.0), vec({4}))[0] == doctest::Approx(2.0).epsilon(1e-14));
  const LinearOperator rot(rotation(), 1.0, 0.0);
  const Vector y = semigroup_apply(rot, std::numbers::pi / 2, vec({1, 0}));
  CHECK((y - vec({0, 1})).norm() <= 1e-10);
  // S(0)x = x exactly
  const Vector x = vec({0.123456789, -3.3});
  CHECK((semigroup_apply(rot, 0.0, x) - x).norm() == 0.0);
  CHECK_THROWS_AS(semigroup_apply(rot, 1.0, vec({NAN, 0})), InvalidInput);
  CHECK_THROWS_AS(semigroup_apply(rot, -1.0, x), InvalidInput);
}

TEST_CASE("semigroup matches the Taylor oracle on non-symmetric generators") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = oracle::random_symmetric(4, rng) + 0.5 * Matrix::Random(4, 4);
    const double omega = a.operatorNorm();
    const LinearOperator op(a, 1.0, omega);
    const Vector x = oracle::random_vector(4, rng);
    for (double t : {0.1, 0.5, 1.0}) {
      const Vector exact = oracle::taylor_expm(a, t) * x;
      CHECK((semigroup_apply(op, t, x) - exact).norm() <= 1e-10 * exact.norm());
    }
  }
}

TEST_CASE("semigroup law and growth bound") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_symmetric(5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const LinearOperator op(a, 1.0, es.eigenvalues().maxCoeff());
    const Vector x = oracle::random_vector(5, rng);
    const double t = u(rng), s = u(rng);
    const Vector lhs = semigroup_apply(op, t + s, x);
    const Vector rhs = semigroup_apply(op, t, semigroup_apply(op, s, x));
    CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + x.norm()));
    CHECK(semigroup_apply(op, t, x).norm() <= op.growth_m() * std::exp(op.growth_omega() * t) * x.norm() + 1e-9);
  }
}

TEST_CASE("resolvent_apply examples") {
  const LinearOperator decay(-Matrix::Identity(1, 1), 1.0, -1.0);
  CHECK(resolvent_apply(decay, 1.0, vec({2}))[0] == doctest::Approx(1.0).epsilon(1e-15));
  const LinearOperator d = diag_operator(vec({1, -1}));
  const Vector y = resolvent_apply(d, 0.25, vec({3, 5}));
  CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(4.0).epsilon(1e-14));
  // h * omega >= 1
  CHECK_THROWS_AS(resolvent_apply(d, 1.0, vec({1, 1})), DomainError);

  const LinearOperator lap = dirichlet_laplacian_1d(31);
  CHECK(lap.matrix()(0, 0) == doctest::Approx(-2.0 * 32 * 32));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = oracle::random_vector(31, rng, 0.0, 1.0);
    const Vector r = resolvent_apply(lap, 0.01, x);
    CHECK(r.minCoeff() >= 0.0);
    CHECK(r.maxCoeff() <= 1.0);
    const Vector exact = oracle::resolvent(lap.matrix(), 0.01, x);
    CHECK((r - exact).norm() <= 1e-12 * (1 + x.norm()));
    // solve residual and the growth estimate
    CHECK(((Matrix::Identity(31, 31) - 0.01 * lap.matrix()) * r - x).norm() <= 1e-12 * (1.0 + x.norm()));
    CHECK(r.norm() <= x.norm() + 1e-9);
  }
}

TEST_CASE("resolvent domain follows the growth bound") {
  // omega bounds the spectral abscissa, so I - hA is invertible whenever h omega < 1.
  Matrix a(2, 2);
  a << 1, 1, 0, 1;
  const LinearOperator op(a, 1.0, 3.0);
  CHECK_THROWS_AS(Resolvent(op, 0.5), DomainError);
  const Resolvent ok(op, 0.2);
  CHECK(ok.reciprocal_condition() > 1e-12);
}

TEST_CASE("resolvent identity residual") {
  const LinearOperator decay(-Matrix::Identity(1, 1), 1.0, -1.0);
  CHECK(resolvent_identity_residual(decay, 0.5, 0.25, vec({1})) <= 1e-12);
  std::mt19937_64 rng(9);
  const Matrix s = oracle::random_symmetric(5, rng);
  const Matrix a = -(s * s.transpose() + 0.1 * Matrix::Identity(5, 5));
  const LinearOperator op(a, 1.0, 0.0);
  CHECK(resolvent_identity_residual(op, 0.1, 0.1, vec({1, 2, 3, 4, 5})) <= 1e-12);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vector x = oracle::random_vector(5, rng);
    worst = std::max(worst, resolvent_identity_residual(op, 0.3, 0.7, x) / (1.0 + x.norm()));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("J_h is a second-order approximation of S(h)") {
  const LinearOperator lap = dirichlet_laplacian_1d(8);
  Vector x(8);
  for (int i = 0; i < 8; ++i) x[i] = std::sin(std::numbers::pi * (i + 1) / 9.0);
  std::vector<double> hs, errs;
  for (double h = 1e-3; h > 1e-5; h /= 2) {
    hs.push_back(h);
    errs.push_back((resolvent_apply(lap, h, x) - semigroup_apply(lap, h, x)).norm());
  }
  CHECK(oracle::loglog_slope(hs, errs) >= 1.9);
}

TEST_CASE("duhamel examples") {
  const LinearOperator rot(rotation(), 1.0, 0.0);
  const Vector x = vec({0.3, -0.7});
  ForcingSignal zero{{0.0}, {Vector::Zero(2)}};
  CHECK((duhamel(rot, x, zero, 0.8) - semigroup_apply(rot, 0.8, x)).norm() <= 1e-14);

  const Vector c = vec({2.0, -1.0});
  ForcingSignal constant{{0.0}, {c}};
  CHECK((duhamel(zero_operator(2), x, constant, 0.6) - (x + 0.6 * c)).norm() <= 1e-14);

  const LinearOperator decay(-Matrix::Identity(1, 1), 1.0, -1.0);
  ForcingSignal one{{0.0}, {vec({1})}};
  CHECK(std::abs(duhamel(decay, vec({0}), one, 1.0)[0] - (1.0 - std::exp(-1.0))) <= 1e-8);

  CHECK_THROWS_AS(duhamel(decay, vec({0}), one, 1.5), DomainError);
}

TEST_CASE("duhamel against Simpson quadrature for piecewise forcing") {
  Matrix a(2, 2);
  a << -0.5, 2.0, -1.0, 0.0;  // non-symmetric, invertible
  const LinearOperator op(a, 1.0, a.operatorNorm());
  ForcingSignal w{{0.0, 0.25, 0.6}, {vec({1, 0}), vec({-2, 1}), vec({0.5, 0.5})}};
  const Vector x = vec({1, 1});
  for (double t : {0.2, 0.6, 0.9}) {
    Vector expect = oracle::taylor_expm(a, t) * x;
    for (std::size_t k = 0; k < w.grid.size(); ++k) {
      const double s0 = w.grid[k];
      if (s0 >= t) break;
      const double s1 = k + 1 < w.grid.size() ? std::min(t, w.grid[k + 1]) : t;
      expect += oracle::duhamel_segment(a, t, s0, s1, w.values[k]);
    }
    CHECK((duhamel(op, x, w, t) - expect).norm() <= 1e-8);
  }
  // singular generator: A = [[0, 1], [0, 0]]
  Matrix n(2, 2);
  n << 0, 1, 0, 0;
  const LinearOperator nil(n, 2.0, 1.0);
  const Vector expect = oracle::taylor_expm(n, 0.7) * x + oracle::duhamel_segment(n, 0.7, 0.0, 0.7, vec({1, 1}));
  CHECK((duhamel(nil, x, ForcingSignal{{0.0}, {vec({1, 1})}}, 0.7) - expect).norm() <= 1e-8);
}

TEST_CASE("forcing signal validation") {
  ForcingSignal bad{{0.0, 0.5, 0.4}, {vec({1}), vec({1}), vec({1})}};
  CHECK_THROWS_AS(bad.validate(1), InvalidInput);
  ForcingSignal mismatch{{0.0, 0.5}, {vec({1})}};
  CHECK_THROWS_AS(mismatch.validate(1), InvalidInput);
  ForcingSignal nonfinite{{0.0}, {vec({INFINITY})}};
  CHECK_THROWS_AS(nonfinite.validate(1), InvalidInput);
}
