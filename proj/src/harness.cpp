#include "cdeg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace cdeg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_decreasing_positive(const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) return false;
    if (i > 0 && !(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::vector<Vector> boundary_sample(const Scenario& s) {
  const auto& region = s.require_region();
  auto nodes = region.relative_boundary_nodes(s.index.degree.base_level + 1);
  if (nodes.empty()) throw InvalidInput("scenario '" + s.name + "': the region has no relative boundary nodes");
  return nodes;
}

std::vector<Strategy> strategies_for(const SetValuedMap& f, std::uint64_t seed) {
  if (f.is_single_valued()) return {Strategy{}};
  return default_strategies(f, seed);
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::vector<SweepEntry> Sweeps::degree_sweep() const {
  std::vector<SweepEntry> out;
  for (std::size_t i = 0; i < h.size(); ++i) out.push_back({alpha.size() == 1 ? alpha.front() : alpha[i], h[i]});
  return out;
}

void Sweeps::validate() const {
  if (t.empty() || !strictly_decreasing_positive(t)) throw InvalidInput("sweeps.t must be strictly decreasing and positive");
  if (h.empty() || !strictly_decreasing_positive(h)) throw InvalidInput("sweeps.h must be strictly decreasing and positive");
  if (alpha.empty() || (alpha.size() != 1 && alpha.size() != h.size())) {
    throw InvalidInput("sweeps.alpha must hold one value or one value per h");
  }
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("sweeps.alpha entries must be positive");
  }
  if (!(integration_h > 0.0) || !std::isfinite(integration_h)) throw InvalidInput("sweeps.integration_h must be positive");
}

const OpenRegion& Scenario::require_region() const {
  if (!region) throw InvalidInput("scenario '" + name + "' has no region");
  return *region;
}

VectorField Scenario::field() const {
  if (f.is_single_valued()) {
    const SetValuedMap map = f;
    return [map](double t, const Vector& x) { return map.evaluate(t, x).barycenter(); };
  }
  const double alpha = sweeps.alpha.back();
  const std::uint64_t seed = seeds.empty() ? 0 : seeds.front();
  return TangentSelection(f, k, alpha, SelectionRule::seeded(seed, f.generator_count())).as_field();
}

VerificationReport verify(const Scenario& s) {
  if (s.op.growth_m() != 1.0) {
    throw PreconditionError("verify: growth_M must be 1 (||S(t)|| <= e^{omega t}); scenario '" + s.name + "' has M = " +
                            std::to_string(s.op.growth_m()));
  }
  s.sweeps.validate();
  const OpenRegion& region = s.require_region();

  VerificationReport rep;
  rep.scenario = s.name;
  RhsOptions ro;
  ro.index = s.index;
  ro.selection_seed = s.seeds.empty() ? 0 : s.seeds.front();
  rep.rhs_certificate = degree_rhs(s.op, s.f, region, s.sweeps.degree_sweep(), ro);
  const int target = rep.rhs_certificate.value;

  const VectorField field = s.field();
  const double alpha = s.sweeps.alpha.back();
  const double hi = s.sweeps.integration_h;
  const auto nodes = s.f.is_single_valued() ? std::vector<Vector>{} : boundary_sample(s);
  for (double t : s.sweeps.t) {
    IndexRow row{t, hi, alpha, std::nullopt, kInf, false, {}};
    try {
      const PointMap pt = [&](const Vector& x) { return poincare(s.op, s.k, field, x, t, hi, s.scheme); };
      const DegreeCertificate idx = fixed_point_index(pt, region, s.index);
      row.index = idx.value;
      row.residual = idx.min_boundary_residual;
      // Every funnel strategy must also stay off the boundary.
      for (const auto& x : nodes) {
        for (const auto& m : funnel(s.op, s.k, s.f, x, t, hi, strategies_for(s.f, ro.selection_seed), alpha, s.scheme)) {
          if (!m.trajectory) continue;
          const double r = (m.trajectory->final_state() - x).norm();
          row.residual = std::min(row.residual, r);
          if (r <= s.index.degree.tol) {
            row.index.reset();
            row.note = "funnel strategy " + m.strategy.name() + " returns to boundary point " + format_vector(x);
          }
        }
      }
    } catch (const ZeroOnBoundary& e) {
      row.residual = e.residual();
      row.note = e.what();
    } catch (const Error& e) {
      row.note = e.what();
    }
    row.pass = row.index && *row.index == target;
    rep.index_table.push_back(row);
  }

  // Rows run from large to small t; count agreement upward from the smallest.
  for (auto it = rep.index_table.rbegin(); it != rep.index_table.rend() && it->pass; ++it) {
    ++rep.agreeing_smallest;
    rep.t_star = it->t;
  }
  rep.pass = rep.agreeing_smallest >= 3;
  return rep;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["rhs_certificate"] = to_json(r.rhs_certificate);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.index_table) {
    nlohmann::json e{{"t", row.t}, {"h", row.h}, {"alpha", row.alpha}, {"residual", number_or_null(row.residual)},
                     {"pass", row.pass}};
    e["index"] = row.index ? nlohmann::json(*row.index) : nlohmann::json(nullptr);
    if (!row.note.empty()) e["note"] = row.note;
    rows.push_back(e);
  }
  j["index_table"] = rows;
  j["t_star"] = r.t_star ? nlohmann::json(*r.t_star) : nlohmann::json(nullptr);
  j["agreeing_smallest"] = r.agreeing_smallest;
  j["pass"] = r.pass;
  return j;
}

void write_report_csv(std::ostream& os, const VerificationReport& r) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  buf << "t,h,alpha,index,residual,rhs_value,pass\n";
  for (const auto& row : r.index_table) {
    buf << row.t << ',' << row.h << ',' << row.alpha << ',';
    if (row.index) buf << *row.index;
    buf << ',';
    if (std::isfinite(row.residual)) buf << row.residual;
    buf << ',' << r.rhs_certificate.value << ',' << (row.pass ? 1 : 0) << '\n';
  }
  os << buf.str();
}

ExclusionReport boundary_exclusion_scan(const Scenario& s, double big_t, const std::vector<double>& z_samples,
                                        const std::vector<double>& t_samples, double positive_tol) {
  if (!(big_t > 0.0)) throw InvalidInput("boundary_exclusion_scan: T must be positive");
  const auto nodes = boundary_sample(s);
  const double hi = s.sweeps.integration_h;
  const double alpha = s.sweeps.alpha.back();
  const std::uint64_t seed = s.seeds.empty() ? 0 : s.seeds.front();

  // f is a tangent selection of F(0, .); for single-valued F it is F itself.
  const VectorField field = s.field();
  const Generator f0 = [field](double, const Vector& x) { return field(0.0, x); };
  // F lives on the time domain [0, 1]; longer horizons reuse the full hull.
  const SetValuedMap hull = hull_map_at(s.f, std::min(big_t, 1.0), 9);

  // Strategy set sized by F, not by the sampled hull.
  const auto strategies = strategies_for(s.f, seed);

  ExclusionReport rep;
  rep.big_t = big_t;
  rep.global_floor = kInf;
  for (double t : t_samples) rep.rows.push_back({t, kInf, 0.0, Vector()});
  for (double z : z_samples) {
    const SetValuedMap gz = blend(f0, hull, z);
    for (auto& row : rep.rows) {
      if (row.t > big_t) throw InvalidInput("boundary_exclusion_scan: t samples must not exceed T");
      for (const auto& x : nodes) {
        for (const auto& m : funnel(s.op, s.k, gz, x, row.t, hi, strategies, alpha, s.scheme)) {
          if (!m.trajectory) continue;
          const double r = (x - m.trajectory->final_state()).norm();
          if (r < row.floor) {
            row.floor = r;
            row.z_at_floor = z;
            row.x_at_floor = x;
          }
        }
      }
    }
  }
  std::vector<const ExclusionRow*> by_t;
  for (const auto& row : rep.rows) {
    rep.global_floor = std::min(rep.global_floor, row.floor);
    by_t.push_back(&row);
  }
  std::sort(by_t.begin(), by_t.end(), [](const auto* a, const auto* b) { return a->t < b->t; });
  for (const auto* row : by_t) {
    if (!(row->floor > positive_tol)) break;
    rep.t_star_candidate = row->t;
  }
  return rep;
}

nlohmann::json to_json(const ExclusionReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json e{{"t", row.t}, {"floor", number_or_null(row.floor)}, {"z", row.z_at_floor}};
    if (row.x_at_floor.size() > 0) {
      e["x"] = std::vector<double>(row.x_at_floor.data(), row.x_at_floor.data() + row.x_at_floor.size());
    }
    rows.push_back(e);
  }
  return {{"T", r.big_t},
          {"rows", rows},
          {"global_floor", number_or_null(r.global_floor)},
          {"t_star_candidate", r.t_star_candidate ? nlohmann::json(*r.t_star_candidate) : nlohmann::json(nullptr)}};
}

Vector psi_hat(const HomotopyFlowSpec& spec, const Vector& x, double t, double z) {
  if (z == 0.0) return spec.g(x);
  const double c = 1.0 / (z * (t + z - z * t));
  return (1.0 - c) * x + c * homotopy_flow(spec.with_z(0.0), x, z * t);
}

BridgeReport homotopy_bridge_check(const Scenario& s, double t, double h, const std::vector<double>& z_samples) {
  const auto nodes = boundary_sample(s);
  const double dt = s.sweeps.integration_h;
  const VectorField field = s.field();
  const HomotopyFlowSpec spec(s.op, s.k, field, 1.0, h, dt, s.scheme);

  BridgeReport rep;
  rep.t = t;
  rep.h = h;
  rep.stage1_min = kInf;
  rep.stage2_min = kInf;
  for (double z : z_samples) {
    if (z < 0.0 || z > 1.0) throw InvalidInput("homotopy_bridge_check: z samples must lie in [0, 1]");
    BridgeRow row{z, kInf, kInf};
    const HomotopyFlowSpec sz = spec.with_z(z);
    for (const auto& x : nodes) {
      row.stage1 = std::min(row.stage1, (x - homotopy_flow(sz, x, t)).norm());
      row.stage2 = std::min(row.stage2, (x - s.k.project(psi_hat(spec, x, t, z))).norm());
    }
    rep.stage1_min = std::min(rep.stage1_min, row.stage1);
    rep.stage2_min = std::min(rep.stage2_min, row.stage2);
    rep.rows.push_back(row);
  }
  for (const auto& x : nodes) {
    const Vector p = poincare(s.op, s.k, field, x, t, dt, s.scheme);
    rep.stage1_endpoint_gap = std::max(rep.stage1_endpoint_gap, (homotopy_flow(spec, x, t) - p).norm());
    rep.stage2_endpoint_gap = std::max(rep.stage2_endpoint_gap, (psi_hat(spec, x, t, 0.0) - spec.g(x)).norm());
  }
  rep.trend_monotone = true;
  for (double z : {1e-1, 1e-2, 1e-3, 1e-4}) {
    double gap = 0.0;
    for (const auto& x : nodes) gap = std::max(gap, (psi_hat(spec, x, t, z) - spec.g(x)).norm());
    if (!rep.trend_gap.empty() && !(gap < rep.trend_gap.back())) rep.trend_monotone = false;
    rep.trend_z.push_back(z);
    rep.trend_gap.push_back(gap);
  }
  rep.certified = rep.stage1_min > 0.0 && rep.stage2_min > 0.0;
  return rep;
}

nlohmann::json to_json(const BridgeReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back({{"z", row.z}, {"stage1", row.stage1}, {"stage2", row.stage2}});
  return {{"t", r.t},
          {"h", r.h},
          {"rows", rows},
          {"stage1_min", r.stage1_min},
          {"stage2_min", r.stage2_min},
          {"stage1_endpoint_gap", r.stage1_endpoint_gap},
          {"stage2_endpoint_gap", r.stage2_endpoint_gap},
          {"trend_z", r.trend_z},
          {"trend_gap", r.trend_gap},
          {"trend_monotone", r.trend_monotone},
          {"certified", r.certified}};
}

}  // namespace cdeg
