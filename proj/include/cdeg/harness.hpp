#pragma once

#include "cdeg/degree.hpp"
#include "cdeg/integrator.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cdeg {

struct Sweeps {
  std::vector<double> t;      // strictly decreasing
  std::vector<double> h;      // degree sweep, strictly decreasing
  std::vector<double> alpha;  // one per h, or a single value for all
  double integration_h = 1e-3;

  std::vector<SweepEntry> degree_sweep() const;
  void validate() const;
};

struct Scenario {
  std::string name;
  LinearOperator op;
  ConvexSet k;
  SetValuedMap f;
  std::optional<OpenRegion> region;
  Sweeps sweeps;
  std::vector<std::uint64_t> seeds{0};
  Scheme scheme = Scheme::ProjectedResolvent;
  std::optional<Vector> initial_state;
  double t_end = 1.0;
  std::optional<int> expected_degree;
  std::string expected_note;
  IndexOptions index;

  const OpenRegion& require_region() const;
  /// Single-valued f is used directly; otherwise the seeded tangent selection
  /// at the last sweep alpha.
  VectorField field() const;
};

struct IndexRow {
  double t = 0.0;
  double h = 0.0;
  double alpha = 0.0;
  std::optional<int> index;
  double residual = 0.0;
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  std::string scenario;
  DegreeCertificate rhs_certificate;
  std::vector<IndexRow> index_table;
  std::optional<double> t_star;
  int agreeing_smallest = 0;
  bool pass = false;
};

/// Compares deg_K(A + F(0,.), U) with Ind_K(P_t, U) along the t sweep.
VerificationReport verify(const Scenario& s);

nlohmann::json to_json(const VerificationReport& r);
/// Columns t,h,alpha,index,residual,rhs_value,pass; one row per t.
void write_report_csv(std::ostream& os, const VerificationReport& r);

struct ExclusionRow {
  double t = 0.0;
  double floor = 0.0;
  double z_at_floor = 0.0;
  Vector x_at_floor;
};

struct ExclusionReport {
  double big_t = 0.0;
  std::vector<ExclusionRow> rows;  // in t_samples order
  double global_floor = 0.0;
  std::optional<double> t_star_candidate;  // largest t with every floor at t' <= t positive
};

/// Floors min ||x - u(t)|| over boundary nodes, z samples and funnel
/// strategies for u' = Au + G(z, u), G(z,x) = (1-z) f(x) + z F̂(T, x).
ExclusionReport boundary_exclusion_scan(const Scenario& s, double big_t, const std::vector<double>& z_samples,
                                        const std::vector<double>& t_samples, double positive_tol = 1e-9);

nlohmann::json to_json(const ExclusionReport& r);

struct BridgeRow {
  double z = 0.0;
  double stage1 = 0.0;  // min ||x - Θ_t(x, z)|| on the boundary
  double stage2 = 0.0;  // min ||x - r(Ψ̂_t(z, x))|| on the boundary
};

struct BridgeReport {
  double t = 0.0;
  double h = 0.0;
  std::vector<BridgeRow> rows;
  double stage1_min = 0.0;
  double stage2_min = 0.0;
  double stage1_endpoint_gap = 0.0;  // max ||Θ_t(x, 1) - P_t x||
  double stage2_endpoint_gap = 0.0;  // max ||Ψ̂_t(0, x) - g(x)||
  std::vector<double> trend_z;       // 1e-1 ... 1e-4
  std::vector<double> trend_gap;     // max ||Ψ̂_t(z, x) - g(x)||
  bool trend_monotone = false;
  bool certified = false;
};

/// Ψ̂_t(z, x) = (1 - c) x + c Θ_{zt}(x, 0), c = 1 / (z (t + z - z t)); Ψ̂_t(0, .) = g.
Vector psi_hat(const HomotopyFlowSpec& spec, const Vector& x, double t, double z);

BridgeReport homotopy_bridge_check(const Scenario& s, double t, double h, const std::vector<double>& z_samples);

nlohmann::json to_json(const BridgeReport& r);

}  // namespace cdeg
