#include "doctest.h"

#include "cdeg/harness.hpp"
#include "cdeg/scenario.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace cdeg;
using nlohmann::json;

namespace {

// Ind(P_t) for x' = Ax: sign det(I - e^{tA}).
int linear_index(const Matrix& a, double t) {
  const Matrix m = Matrix::Identity(a.rows(), a.cols()) - oracle::taylor_expm(a, t);
  return m.determinant() > 0 ? 1 : -1;
}

json scalar_doc(json map, json region) {
  return json{{"name", "scalar"},
              {"operator", {{"kind", "matrix"}, {"matrix", {{-1.0}}}, {"growth", {{"M", 1.0}, {"omega", -1.0}}}}},
              {"set", {{"kind", "whole_space"}, {"dim", 1}}},
              {"map", std::move(map)},
              {"region", std::move(region)},
              {"sweeps", {{"t", {0.2, 0.1, 0.05}}, {"h", {0.1, 0.03, 0.01}}, {"alpha", {0.1, 0.03, 0.01}}}}};
}

}  // namespace

TEST_CASE("verify: linear examples agree with the closed-form Poincare map") {
  for (const char* name : {"linear_sink_2d", "saddle_2d", "rotation_sink_2d"}) {
    CAPTURE(name);
    const Scenario s = build_scenario(bundled_scenario(name));
    const VerificationReport r = verify(s);
    CHECK(r.pass);
    CHECK(r.agreeing_smallest >= 3);
    REQUIRE(r.index_table.size() == s.sweeps.t.size());
    for (const IndexRow& row : r.index_table) {
      REQUIRE(row.index);
      CHECK(*row.index == linear_index(s.op.matrix(), row.t));
      CHECK(*row.index == r.rhs_certificate.value);
      CHECK(row.residual > 0);
    }
    REQUIRE(r.t_star);
    CHECK(*r.t_star == s.sweeps.t.front());
  }
  CHECK(verify(build_scenario(bundled_scenario("saddle_2d"))).rhs_certificate.value == -1);
}

TEST_CASE("verify: orthant contraction") {
  const Scenario s = build_scenario(bundled_scenario("orthant_contraction"));
  const VerificationReport r = verify(s);
  CHECK(r.rhs_certificate.value == 1);
  CHECK(r.pass);
  // the flow contracts towards (1, 1): P_t(x) = 1 + e^{-t}(x - 1), one fixed point, index 1
  for (const IndexRow& row : r.index_table) CHECK(row.index == 1);
}

TEST_CASE("verify: set-valued right-hand sides") {
  const VerificationReport r = verify(build_scenario(bundled_scenario("interval_sink_1d")));
  CHECK(r.pass);
  CHECK(r.rhs_certificate.value == 1);
  const VerificationReport c = verify(build_scenario(bundled_scenario("cubic_three_zeros_1d")));
  CHECK(c.pass);
  CHECK(c.rhs_certificate.value == -1);
}

TEST_CASE("verify preconditions and failures") {
  json doc = bundled_scenario("linear_sink_2d");
  doc["operator"]["growth"]["M"] = 2.0;
  CHECK_THROWS_AS(verify(build_scenario(doc)), PreconditionError);

  // A = 0, f(x) = 1 - x: equilibrium at x = 1 on the boundary of (-1, 1)
  json eq = scalar_doc({{"preset", "linear"}, {"b", {{-1.0}}}, {"c", {1.0}}},
                       {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.0}});
  eq["operator"] = {{"kind", "zero"}, {"dim", 1}};
  CHECK_THROWS_AS(verify(build_scenario(eq)), ZeroOnBoundary);

  const Scenario adv = build_scenario(bundled_scenario("adversarial_drift_1d"));
  CHECK_THROWS_AS(verify(adv), DegreeInconclusive);
}

TEST_CASE("boundary_exclusion_scan: sink closed form") {
  const Scenario s = build_scenario(bundled_scenario("linear_sink_2d"));
  const std::vector<double> ts = {0.5, 0.2, 0.1, 0.05};
  const ExclusionReport r = boundary_exclusion_scan(s, 1.0, {0.0, 0.5, 1.0}, ts);
  REQUIRE(r.rows.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(std::abs(r.rows[i].floor - (1 - std::exp(-ts[i]))) <= 1e-3);
  }
  CHECK(r.global_floor == doctest::Approx(1 - std::exp(-0.05)).epsilon(1e-2));
  REQUIRE(r.t_star_candidate);
  CHECK(*r.t_star_candidate == 0.5);
  CHECK(to_json(r)["rows"].size() == ts.size());
}

TEST_CASE("boundary_exclusion_scan: center and boundary equilibrium") {
  const Scenario center = build_scenario(bundled_scenario("center_2d"));
  const double two_pi = 2 * std::numbers::pi;
  const ExclusionReport r = boundary_exclusion_scan(center, two_pi, {0.0, 1.0}, {two_pi, 0.5, 0.2, 0.1});
  CHECK(r.rows[0].floor < 1e-6);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    // chord of the rotation through angle t on the unit circle: 2 sin(t/2)
    CHECK(std::abs(r.rows[i].floor - 2 * std::sin(r.rows[i].t / 2)) <= 1e-3);
  }
  REQUIRE(r.t_star_candidate);
  CHECK(*r.t_star_candidate == 0.5);

  json eq = scalar_doc({{"preset", "linear"}, {"b", {{-1.0}}}, {"c", {1.0}}},
                       {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.0}});
  eq["operator"] = {{"kind", "zero"}, {"dim", 1}};
  const ExclusionReport e = boundary_exclusion_scan(build_scenario(eq), 0.4, {0.0}, {0.2, 0.1});
  for (const auto& row : e.rows) CHECK(row.floor <= 1e-9);
  CHECK_FALSE(e.t_star_candidate);
}

TEST_CASE("homotopy_bridge_check on the scalar sink") {
  const Scenario s = build_scenario(
      scalar_doc({{"preset", "zero"}, {"dim", 1}}, {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.0}}));
  const double t = 0.2, h = 0.05;
  const std::vector<double> zs = {0.0, 0.25, 0.5, 0.75, 1.0};
  const BridgeReport r = homotopy_bridge_check(s, t, h, zs);
  CHECK(r.stage1_min > 0);
  CHECK(r.stage2_min > 0);
  CHECK(r.certified);
  CHECK(r.stage1_endpoint_gap <= 1e-9);
  CHECK(r.stage2_endpoint_gap <= 1e-9);
  CHECK(r.trend_monotone);
  CHECK(r.trend_gap.back() < r.trend_gap.front());
  // u' = -z u + g_z(u) with g(x) = x / (1 + h): rate z + (1 - z) h / (1 + h)
  for (const BridgeRow& row : r.rows) {
    const double rate = row.z + (1 - row.z) * h / (1 + h);
    CHECK(std::abs(row.stage1 - (1 - std::exp(-rate * t))) <= 1e-3);
  }
  CHECK(to_json(r)["rows"].size() == zs.size());
}

TEST_CASE("report determinism") {
  const Scenario s = build_scenario(bundled_scenario("interval_sink_1d"));
  std::ostringstream a, b;
  write_report_csv(a, verify(s));
  write_report_csv(b, verify(s));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,h,alpha,index,residual,rhs_value,pass\n", 0) == 0);
  CHECK(to_json(verify(s)).dump() == to_json(verify(s)).dump());
}

TEST_CASE("projection precondition holds for every bundled constraint set") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 3.0);
  for (const auto& name : bundled_scenario_names()) {
    CAPTURE(name);
    const Scenario s = build_scenario(bundled_scenario(name));
    const auto dim = s.k.dim();
    double worst = -1.0;
    for (int i = 0; i < 1000; ++i) {
      Vector y(dim), w(dim);
      for (Eigen::Index j = 0; j < dim; ++j) {
        y[j] = n(rng);
        w[j] = n(rng);
      }
      worst = std::max(worst, s.k.variational_residual(y, s.k.project(w)));
    }
    CHECK(worst <= 1e-10);
  }
}
