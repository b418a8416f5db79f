#pragma once

#include "cdeg/common.hpp"
#include "cdeg/convex_set.hpp"
#include "cdeg/linear_operator.hpp"
#include "cdeg/set_valued_map.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cdeg {

enum class Scheme { ProjectedResolvent, ProjectedSemigroup };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> forcings;  // w_k = f(t_k, u_k)
  Scheme scheme = Scheme::ProjectedResolvent;

  const Vector& final_state() const { return states.back(); }
  /// max_k d(u_k; K)
  double max_constraint_violation(const ConvexSet& k) const;
};

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ConvexSet& k);

/// Selection failure during a run; carries the trajectory computed so far.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// The one-step map u -> r(J_h(u + h f(t,u))) (or its semigroup variant) with
/// the linear factor prepared once.
class OneStep {
 public:
  OneStep(const LinearOperator& op, const ConvexSet& k, double h, Scheme scheme);

  Vector operator()(const VectorField& f, double t, const Vector& u) const;
  /// Same map with the forcing value supplied by the caller.
  Vector apply_with(const Vector& u, const Vector& w) const;
  /// Linear part without the projection: J_h v or S(h) v.
  Vector linear(const Vector& v) const;
  double h() const { return h_; }

 private:
  ConvexSet k_;
  double h_;
  Scheme scheme_;
  std::optional<Resolvent> resolvent_;
  Matrix propagator_;
};

Vector step(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& u, double t, double h,
            Scheme scheme = Scheme::ProjectedResolvent);

/// Uniform grid with n = ceil(t_end / h) steps of size t_end / n <= h.
Trajectory solve(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t_end,
                 double h, Scheme scheme = Scheme::ProjectedResolvent);

Vector poincare(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t,
                double h, Scheme scheme = Scheme::ProjectedResolvent);

struct Strategy {
  enum class Kind { TangentBarycenter, Vertex, RandomSeeded };
  Kind kind = Kind::TangentBarycenter;
  int vertex = 0;
  std::uint64_t seed = 0;

  std::string name() const;
  static Strategy parse(const std::string& name);
};

/// All vertex strategies plus the barycenter and one seeded random strategy.
std::vector<Strategy> default_strategies(const SetValuedMap& f, std::uint64_t seed);

struct FunnelMember {
  Strategy strategy;
  std::optional<Trajectory> trajectory;
  std::string error;
};

std::vector<FunnelMember> funnel(const LinearOperator& op, const ConvexSet& k, const SetValuedMap& f, const Vector& x0,
                                 double t, double h, const std::vector<Strategy>& strategies, double alpha = 1e-6,
                                 Scheme scheme = Scheme::ProjectedResolvent);

/// Field realising a funnel strategy; random strategies redraw convex weights
/// each call from their own seeded generator.
VectorField strategy_field(const SetValuedMap& f, const ConvexSet& k, const Strategy& s, double alpha);

/// Data of the homotopy joining the Poincaré operator of u' = Au + f(u) to
/// that of u' = -u + g(u), g = r∘J_h(I + h f).
class HomotopyFlowSpec {
 public:
  HomotopyFlowSpec(LinearOperator op, ConvexSet k, VectorField f, double z, double h, double dt,
                   Scheme scheme = Scheme::ProjectedResolvent);

  double z() const { return z_; }
  double h() const { return h_; }
  double dt() const { return dt_; }
  HomotopyFlowSpec with_z(double z) const;

  Vector g(const Vector& x) const;
  Vector g_z(double t, const Vector& x) const;
  Matrix a_z() const;
  Vector f_z(const Vector& x) const;
  /// ||A_z x + f_z(x) - (z A x + g_z(x))||
  double identity_residual(const Vector& x) const;

  const LinearOperator& op() const { return op_; }
  const ConvexSet& set() const { return k_; }
  const VectorField& field() const { return f_; }
  Scheme scheme() const { return scheme_; }

 private:
  LinearOperator op_;
  ConvexSet k_;
  VectorField f_;
  double z_;
  double h_;
  double dt_;
  Scheme scheme_;
  Resolvent jh_;
};

/// Θ(x0, z)(t): integrates u' = zAu + g_z(u) with the projected scheme.
Vector homotopy_flow(const HomotopyFlowSpec& spec, const Vector& x0, double t);

/// max_k d(J_h(u_k + h f(t_k,u_k)); K) / h along the run, restarting each
/// step from the projected state.
double viability_drift(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t,
                       double h);

}  // namespace cdeg
