#pragma once

#include "cdeg/common.hpp"
#include "cdeg/convex_set.hpp"
#include "cdeg/linear_operator.hpp"
#include "cdeg/region.hpp"
#include "cdeg/set_valued_map.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cdeg {

struct StabilityEntry {
  std::string param;
  std::optional<int> value;
  double min_residual = 0.0;
  std::string note;
};

/// Integer degree or index with the parameters under which it stabilized.
/// The stabilization rule is a heuristic: on adversarial inputs an
/// insufficiently fine sweep can certify a wrong integer.
struct DegreeCertificate {
  int value = 0;
  std::string method;
  double h = 0.0;
  double alpha = 0.0;
  int mesh_level = 0;
  double perturbation = 0.0;
  double margin = 0.0;
  std::vector<StabilityEntry> stability;
  double min_boundary_residual = 0.0;
  std::optional<Vector> located_zero;
  std::optional<double> zero_residual;
};

nlohmann::json to_json(const DegreeCertificate& c);

/// Raised when refinement or the (alpha, h) sweep does not settle on one
/// integer; carries the table computed so far.
class DegreeInconclusive : public Inconclusive {
 public:
  DegreeInconclusive(const std::string& what, DegreeCertificate partial)
      : Inconclusive(what), partial_(std::move(partial)) {}
  const DegreeCertificate& partial() const { return partial_; }

 private:
  DegreeCertificate partial_;
};

struct DegreeOptions {
  double tol = 1e-9;       // boundary residual floor
  int base_level = 0;      // first mesh refinement level
  int max_level = 4;       // last refinement level tried
  int max_bisection_depth = 24;
};

struct ChainDegree {
  double raw = 0.0;  // winding sum in units of full turns / spheres
  int value = 0;
  double min_residual = 0.0;
  Vector argmin;
  long evaluations = 0;
};

/// Degree of map over the region enclosed by the chain (adaptive bisection
/// until consecutive image directions differ by less than pi/2).
ChainDegree chain_degree(const PointMap& map, const BoundaryChain& chain, const DegreeOptions& opt);

/// Brouwer degree on the full-space shape of U (the ambient set is ignored).
DegreeCertificate brouwer_degree(const PointMap& map, const OpenRegion& region, const DegreeOptions& opt = {});

struct IndexOptions {
  DegreeOptions degree;
  double margin_factor = 2.0;  // B enlarges U by margin_factor * diam(U) on every side
};

/// Constrained fixed-point index Ind_K(f, U) := deg(I - f∘r, r^{-1}(U) ∩ B).
DegreeCertificate fixed_point_index(const PointMap& f, const OpenRegion& region, const IndexOptions& opt = {});

struct SweepEntry {
  double alpha;
  double h;
};

struct RhsOptions {
  IndexOptions index;
  std::uint64_t selection_seed = 0;
  double boundary_tol = 1e-8;
  bool locate_zero = true;
};

/// min over the relative-boundary mesh of dist(0, Ax + G(0, x)).
double rhs_boundary_residual(const LinearOperator& op, const SetValuedMap& g, const OpenRegion& region, int level,
                             Vector* where = nullptr);

/// deg_K(A + G, U) as the stabilized index of r∘J_h(I + h g) over a sweep of
/// decreasing (alpha, h); g is a tangent selection of G(0, .).
DegreeCertificate degree_rhs(const LinearOperator& op, const SetValuedMap& g, const OpenRegion& region,
                             const std::vector<SweepEntry>& sweep, const RhsOptions& opt = {});

struct ZeroSearch {
  Vector x;
  double residual;
  bool found;
};

/// Newton / bisection search for a zero of map inside U.
ZeroSearch locate_zero(const PointMap& map, const OpenRegion& region, double target = 1e-12);

struct HomotopyDegreeReport {
  std::vector<double> z;
  std::vector<int> values;
  std::vector<double> boundary_residuals;
  double min_residual = 0.0;
  bool constant = false;
};

using MapFamily = std::function<SetValuedMap(double)>;

HomotopyDegreeReport degree_homotopy_check(const LinearOperator& op, const MapFamily& h, const OpenRegion& region,
                                           const std::vector<double>& z_samples, const std::vector<SweepEntry>& sweep,
                                           const RhsOptions& opt = {});

}  // namespace cdeg
