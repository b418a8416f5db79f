#include "doctest.h"

#include "cdeg/convex_set.hpp"
#include "cdeg/small_qp.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace cdeg;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const double kInf = std::numeric_limits<double>::infinity();

ConvexSet unit_box() { return ConvexSet::box(vec({0, 0}), vec({1, 1})); }

ConvexSet triangle() {
  Matrix a(3, 2);
  a << 1, 1, -1, 0, 0, -1;
  return ConvexSet::halfspaces(a, vec({1, 0, 0}));
}

// d(x + h v; K) / h, the difference quotient behind the tangent-cone definition.
double slope(const ConvexSet& k, const Vector& x, const Vector& v, double h) { return k.distance(x + h * v) / h; }

}  // namespace

TEST_CASE("contains examples") {
  CHECK(unit_box().contains(vec({0.5, 0.5}), 0.0));
  CHECK_FALSE(unit_box().contains(vec({1.0000001, 0}), 1e-9));
  CHECK(triangle().contains(vec({0.3, 0.3}), 0.0));
  CHECK_THROWS_AS(unit_box().contains(vec({0.5}), 0.0), InvalidInput);
}

TEST_CASE("project examples") {
  CHECK((unit_box().project(vec({1.5, -0.3})) - vec({1, 0})).norm() == 0.0);
  CHECK((ConvexSet::ball(vec({0, 0}), 1.0).project(vec({3, 4})) - vec({0.6, 0.8})).norm() <= 1e-15);
  Matrix a(1, 2);
  a << 1, 1;
  CHECK((ConvexSet::halfspaces(a, vec({1})).project(vec({1, 1})) - vec({0.5, 0.5})).norm() <= 1e-15);
}

TEST_CASE("construction invariants") {
  CHECK_THROWS_AS(ConvexSet::box(vec({1, 0}), vec({0, 1})), InvalidInput);
  CHECK_THROWS_AS(ConvexSet::ball(vec({0, 0}), -1.0), InvalidInput);
  Matrix zero_row(1, 2);
  zero_row << 0, 0;
  CHECK_THROWS_AS(ConvexSet::halfspaces(zero_row, vec({1})), InvalidInput);
  Matrix a(2, 1);
  a << 1, -1;
  // x <= -1 and x >= 1
  CHECK_THROWS_AS(ConvexSet::halfspaces(a, vec({-1, -1})), InvalidInput);
  for (const auto& k : {unit_box(), triangle(), ConvexSet::ball(vec({2, 0}), 0.5)}) {
    CHECK(k.contains(k.feasible_point(), 1e-12));
  }
}

TEST_CASE("halfspace projection matches the brute-force polygon oracle") {
  Matrix g(5, 2);
  g << 1, 2, -1, 0.5, 0.3, -1, -0.7, -1, 2, -0.2;
  const Vector b = vec({2, 1, 1, 1.5, 2.5});
  const ConvexSet k = ConvexSet::halfspaces(g, b);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const Vector y = oracle::random_vector(2, rng, -5, 5);
    CHECK(std::abs(k.distance(y) - oracle::polygon_distance(g, b, y)) <= 1e-10);
  }
}

TEST_CASE("projection invariants on every kind") {
  std::mt19937_64 rng(4);
  const std::vector<ConvexSet> sets = {
      unit_box(), ConvexSet::box(vec({0, -kInf}), vec({kInf, 2})), triangle(), ConvexSet::ball(vec({0.5, -0.5}), 2.0),
      ConvexSet::product({ConvexSet::box(vec({0}), vec({1})), ConvexSet::ball(vec({0, 0}), 1.0)})};
  for (const auto& k : sets) {
    const int n = static_cast<int>(k.dim());
    for (int i = 0; i < 200; ++i) {
      const Vector y1 = oracle::random_vector(n, rng, -4, 4);
      const Vector y2 = oracle::random_vector(n, rng, -4, 4);
      const Vector r1 = k.project(y1);
      const Vector r2 = k.project(y2);
      CHECK(k.contains(r1, 1e-10));
      CHECK((k.project(r1) - r1).norm() <= 1e-12);
      CHECK((r1 - r2).norm() <= (y1 - y2).norm() + 1e-10);
      CHECK(std::abs(k.distance(y1) - (y1 - r1).norm()) <= 1e-10);
      CHECK((k.distance(y1) <= 1e-10) == k.contains(y1, 1e-10));
    }
  }
}

TEST_CASE("product sets factor componentwise") {
  const ConvexSet a = ConvexSet::box(vec({0}), vec({1}));
  const ConvexSet b = ConvexSet::ball(vec({0, 0}), 1.0);
  const ConvexSet p = ConvexSet::product({a, b});
  CHECK(p.dim() == 3);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Vector y = oracle::random_vector(3, rng, -3, 3);
    Vector expect(3);
    expect << a.project(y.head(1)), b.project(y.tail(2));
    CHECK((p.project(y) - expect).norm() == 0.0);
  }
  // boundary of both factors: cone rows split by block
  const Vector x = vec({1, 1, 0});
  const TangentCone c = p.tangent_cone(x);
  CHECK(c.factors_over({1, 2}));
  CHECK(c.contains(vec({-1, -1, 5})));
  CHECK_FALSE(c.contains(vec({1, 0, 0})));
  CHECK_FALSE(c.contains(vec({0, 1, 0})));
}

TEST_CASE("variational residual examples") {
  const ConvexSet ball = ConvexSet::ball(vec({0, 0}), 1.0);
  CHECK(ball.variational_residual(vec({0.2, 0.1}), vec({-0.5, 0.5})) == 0.0);
  const ConvexSet seg = ConvexSet::box(vec({0}), vec({1}));
  CHECK(seg.variational_residual(vec({2}), vec({0})) == doctest::Approx(-1.0));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    Vector k = oracle::random_vector(2, rng);
    if (k.norm() > 1) k /= 1.01 * k.norm();
    CHECK(ball.variational_residual(vec({2, 0}), k) <= 1e-12);
  }
  CHECK_THROWS_AS(seg.variational_residual(vec({2}), vec({3})), PreconditionError);
}

TEST_CASE("tangent cone examples") {
  const ConvexSet orthant = ConvexSet::box(vec({0, 0}), vec({kInf, kInf}));
  const TangentCone c = orthant.tangent_cone(vec({0, 5}));
  CHECK(c.contains(vec({0, -3})));
  CHECK(c.contains(vec({2, 7})));
  CHECK_FALSE(c.contains(vec({-1e-6, 0})));

  CHECK(unit_box().tangent_cone(vec({0.5, 0.5})).full_space());
  CHECK(ConvexSet::ball(vec({0, 0}), 1.0).tangent_cone(vec({0.2, 0})).full_space());

  const TangentCone b = ConvexSet::ball(vec({0, 0}), 1.0).tangent_cone(vec({1, 0}));
  CHECK(b.contains(vec({0, 1})));
  CHECK(b.contains(vec({-1, 3})));
  CHECK_FALSE(b.contains(vec({1e-3, 1})));
  // oracle: slope of the distance quotient on a grid of h
  for (const Vector& v : {vec({0, 1}), vec({-1, 3}), vec({0.2, 1})}) {
    const bool inside = slope(ConvexSet::ball(vec({0, 0}), 1.0), vec({1, 0}), v, 1e-6) < 1e-3;
    CHECK(inside == b.contains(v));
  }

  CHECK_THROWS_AS(unit_box().tangent_cone(vec({2, 0})), PreconditionError);
}

TEST_CASE("tangent cone is a cone") {
  std::mt19937_64 rng(12);
  const TangentCone c = triangle().tangent_cone(vec({0, 0}));
  CHECK(c.contains(Vector::Zero(2)));
  for (int i = 0; i < 100; ++i) {
    const Vector v = oracle::random_vector(2, rng);
    CHECK(c.contains(v) == c.contains(7.5 * v));
    const Vector p = c.project(v);
    CHECK(c.contains(p));
    CHECK((c.project(p) - p).norm() <= 1e-12);
  }
}

TEST_CASE("tangency_lp examples") {
  const TangentCone full(vec({0, 0}), Matrix(0, 2));
  const auto p = tangency_lp(full, {vec({3, -1})}, 0.0);
  REQUIRE(p);
  CHECK((*p - vec({3, -1})).norm() == 0.0);

  const ConvexSet half = ConvexSet::box(vec({0}), vec({kInf}));
  const TangentCone at0 = half.tangent_cone(vec({0}));
  CHECK_FALSE(tangency_lp(at0, {vec({-1})}, 0.0));
  const auto q = tangency_lp(at0, {vec({-1}), vec({2})}, 0.0);
  REQUIRE(q);
  // oracle: scan the segment [-1, 2] for feasibility
  bool found = false;
  for (int i = 0; i <= 300; ++i) found = found || (-1.0 + 0.01 * i >= 0.0 && std::abs(-1.0 + 0.01 * i - (*q)[0]) < 1e-2);
  CHECK(found);
  CHECK((*q)[0] >= -1e-9);
  CHECK((*q)[0] <= 2.0 + 1e-9);
  // ball radius lets a hull that misses the cone reach it
  CHECK(tangency_lp(at0, {vec({-1})}, 1.5));
}
