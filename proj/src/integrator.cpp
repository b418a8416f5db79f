#include "cdeg/integrator.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace cdeg {

std::string scheme_name(Scheme s) {
  return s == Scheme::ProjectedResolvent ? "projected_resolvent" : "projected_semigroup";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "projected_resolvent") return Scheme::ProjectedResolvent;
  if (name == "projected_semigroup") return Scheme::ProjectedSemigroup;
  throw InvalidInput("unknown scheme '" + name + "'");
}

double Trajectory::max_constraint_violation(const ConvexSet& k) const {
  double worst = 0.0;
  for (const auto& u : states) worst = std::max(worst, k.distance(u));
  return worst;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ConvexSet& k) {
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  os << "t";
  for (Eigen::Index i = 1; i <= n; ++i) os << ",u_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",w_" << i;
  os << ",d(u;K)\n";
  os << std::setprecision(17);
  for (std::size_t r = 0; r < traj.states.size(); ++r) {
    os << traj.times[r];
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << traj.states[r][i];
    for (Eigen::Index i = 0; i < n; ++i) {
      os << ',';
      if (r < traj.forcings.size()) {
        os << traj.forcings[r][i];
      } else {
        os << "nan";
      }
    }
    os << ',' << k.distance(traj.states[r]) << '\n';
  }
}

// -------------------------------------------------------------------- OneStep

OneStep::OneStep(const LinearOperator& op, const ConvexSet& k, double h, Scheme scheme)
    : k_(k), h_(h), scheme_(scheme) {
  if (op.dim() != k.dim()) throw InvalidInput("operator and constraint set dimensions differ");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step size must be positive");
  if (h * op.growth_omega() >= 1.0) throw DomainError("step size violates h*omega < 1");
  if (scheme == Scheme::ProjectedResolvent) {
    resolvent_.emplace(op, h);
  } else {
    propagator_ = op.semigroup_matrix(h);
  }
}

Vector OneStep::linear(const Vector& v) const {
  return scheme_ == Scheme::ProjectedResolvent ? resolvent_->apply(v) : Vector(propagator_ * v);
}

Vector OneStep::apply_with(const Vector& u, const Vector& w) const {
  require_dim(w, u.size(), "forcing");
  if (!w.allFinite()) throw NumericalError("forcing value is not finite");
  return k_.project(linear(u + h_ * w));
}

Vector OneStep::operator()(const VectorField& f, double t, const Vector& u) const { return apply_with(u, f(t, u)); }

Vector step(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& u, double t, double h,
            Scheme scheme) {
  require_dim(u, k.dim(), "step");
  if (k.distance(u) > 1e-9) throw PreconditionError("step: state is not in K");
  return OneStep(op, k, h, scheme)(f, t, u);
}

namespace {

int step_count(double t_end, double h) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("final time must be finite and nonnegative");
  if (!(h > 0.0)) throw DomainError("step size must be positive");
  if (t_end == 0.0) return 0;
  return static_cast<int>(std::ceil(t_end / h - 1e-9));
}

}  // namespace

Trajectory solve(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t_end,
                 double h, Scheme scheme) {
  require_dim(x0, k.dim(), "solve");
  require_finite(x0, "solve");
  if (k.distance(x0) > 1e-9) throw PreconditionError("solve: initial state " + format_vector(x0) + " is not in K");
  const int n = step_count(t_end, h);
  Trajectory traj;
  traj.scheme = scheme;
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);
  if (n == 0) return traj;
  const double dt = t_end / n;
  const OneStep one(op, k, dt, scheme);
  Vector u = x0;
  for (int s = 0; s <= n; ++s) {
    const double t = s * dt;
    Vector w;
    try {
      w = f(t, u);
    } catch (const TangencyViolation& e) {
      throw SolveError(e.what(), traj);
    }
    traj.forcings.push_back(w);
    if (s == n) break;
    u = one.apply_with(u, w);
    traj.times.push_back((s + 1) * dt);
    traj.states.push_back(u);
  }
  traj.times.back() = t_end;
  return traj;
}

Vector poincare(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t,
                double h, Scheme scheme) {
  require_dim(x0, k.dim(), "poincare");
  const int n = step_count(t, h);
  if (n == 0) return x0;
  if (k.distance(x0) > 1e-9) throw PreconditionError("poincare: initial state " + format_vector(x0) + " is not in K");
  const double dt = t / n;
  const OneStep one(op, k, dt, scheme);
  Vector u = x0;
  for (int s = 0; s < n; ++s) u = one(f, s * dt, u);
  return u;
}

// --------------------------------------------------------------------- funnel

std::string Strategy::name() const {
  switch (kind) {
    case Kind::TangentBarycenter: return "tangent_barycenter";
    case Kind::Vertex: return "vertex_" + std::to_string(vertex);
    case Kind::RandomSeeded: return "random_seeded(" + std::to_string(seed) + ")";
  }
  return "?";
}

Strategy Strategy::parse(const std::string& name) {
  if (name == "tangent_barycenter") return {};
  if (name.rfind("vertex_", 0) == 0) return {Kind::Vertex, std::stoi(name.substr(7)), 0};
  if (name.rfind("random_seeded(", 0) == 0 && name.back() == ')') {
    return {Kind::RandomSeeded, 0, std::stoull(name.substr(14, name.size() - 15))};
  }
  throw InvalidInput("unknown funnel strategy '" + name + "'");
}

std::vector<Strategy> default_strategies(const SetValuedMap& f, std::uint64_t seed) {
  std::vector<Strategy> out{Strategy{}};
  for (int j = 0; j < f.generator_count(); ++j) out.push_back({Strategy::Kind::Vertex, j, 0});
  out.push_back({Strategy::Kind::RandomSeeded, 0, seed});
  return out;
}

VectorField strategy_field(const SetValuedMap& f, const ConvexSet& k, const Strategy& s, double alpha) {
  switch (s.kind) {
    case Strategy::Kind::TangentBarycenter: return TangentSelection(f, k, alpha).as_field();
    case Strategy::Kind::Vertex: return TangentSelection(f, k, alpha, SelectionRule::vertex_of(s.vertex)).as_field();
    case Strategy::Kind::RandomSeeded: {
      auto rng = std::make_shared<std::mt19937_64>(s.seed);
      const int m = f.generator_count();
      return [f, k, alpha, rng, m](double t, const Vector& x) {
        std::exponential_distribution<double> e(1.0);
        SelectionRule rule;
        rule.kind = SelectionRule::Kind::Weights;
        for (int j = 0; j < m; ++j) rule.weights.push_back(e(*rng));
        return TangentSelection(f, k, alpha, rule)(t, x);
      };
    }
  }
  throw InvalidInput("unknown strategy");
}

std::vector<FunnelMember> funnel(const LinearOperator& op, const ConvexSet& k, const SetValuedMap& f, const Vector& x0,
                                 double t, double h, const std::vector<Strategy>& strategies, double alpha,
                                 Scheme scheme) {
  std::vector<FunnelMember> out;
  out.reserve(strategies.size());
  for (const auto& s : strategies) {
    FunnelMember member{s, std::nullopt, {}};
    try {
      member.trajectory = solve(op, k, strategy_field(f, k, s, alpha), x0, t, h, scheme);
    } catch (const SolveError& e) {
      member.error = e.what();
    }
    out.push_back(std::move(member));
  }
  return out;
}

// ------------------------------------------------------------------- homotopy

HomotopyFlowSpec::HomotopyFlowSpec(LinearOperator op, ConvexSet k, VectorField f, double z, double h, double dt,
                                   Scheme scheme)
    : op_(std::move(op)), k_(std::move(k)), f_(std::move(f)), z_(z), h_(h), dt_(dt), scheme_(scheme), jh_(op_, h) {
  if (!(z >= 0.0 && z <= 1.0)) throw InvalidInput("homotopy parameter z must lie in [0, 1]");
  if (!(dt > 0.0)) throw InvalidInput("homotopy integration step must be positive");
}

HomotopyFlowSpec HomotopyFlowSpec::with_z(double z) const {
  return HomotopyFlowSpec(op_, k_, f_, z, h_, dt_, scheme_);
}

Vector HomotopyFlowSpec::g(const Vector& x) const { return k_.project(jh_.apply(x + h_ * f_(0.0, x))); }

Vector HomotopyFlowSpec::g_z(double t, const Vector& x) const {
  if (z_ == 1.0) return f_(t, x);
  if (z_ == 0.0) return g(x) - x;
  return z_ * f_(t, x) + (1.0 - z_) * (g(x) - x);
}

Matrix HomotopyFlowSpec::a_z() const {
  const auto n = op_.dim();
  return (z_ - 1.0 - z_ / h_) * Matrix::Identity(n, n) + z_ * op_.matrix();
}

Vector HomotopyFlowSpec::f_z(const Vector& x) const {
  const Vector shifted = x + h_ * f_(0.0, x);
  return (z_ / h_) * shifted + (1.0 - z_) * k_.project(jh_.apply(shifted));
}

double HomotopyFlowSpec::identity_residual(const Vector& x) const {
  const Vector lhs = a_z() * x + f_z(x);
  const Vector rhs = z_ * (op_.matrix() * x) + z_ * f_(0.0, x) + (1.0 - z_) * (g(x) - x);
  return (lhs - rhs).norm();
}

Vector homotopy_flow(const HomotopyFlowSpec& spec, const Vector& x0, double t) {
  const LinearOperator scaled = spec.z() == 1.0 ? spec.op() : spec.op().scaled(spec.z());
  const ConvexSet& k = spec.set();
  const int n = step_count(t, spec.dt());
  if (n == 0) return x0;
  if (k.distance(x0) > 1e-9) throw PreconditionError("homotopy_flow: initial state is not in K");
  const double dt = t / n;
  const OneStep one(scaled, k, dt, spec.scheme());
  Vector u = x0;
  for (int s = 0; s < n; ++s) {
    const double res = spec.identity_residual(u);
    if (res > 1e-10 * (1.0 + u.norm()) * (1.0 + spec.z() / spec.h())) {
      std::ostringstream os;
      os << "homotopy identity A_z x + f_z(x) = zAx + g_z(x) fails by " << res << " at " << format_vector(u);
      throw NumericalError(os.str());
    }
    u = one.apply_with(u, spec.g_z(s * dt, u));
  }
  return u;
}

double viability_drift(const LinearOperator& op, const ConvexSet& k, const VectorField& f, const Vector& x0, double t,
                       double h) {
  require_dim(x0, k.dim(), "viability_drift");
  if (k.distance(x0) > 1e-9) throw PreconditionError("viability_drift: initial state is not in K");
  const int n = step_count(t, h);
  if (n == 0) return 0.0;
  const double dt = t / n;
  const Resolvent jh(op, dt);
  Vector u = x0;
  double worst = 0.0;
  for (int s = 0; s < n; ++s) {
    const Vector raw = jh.apply(u + dt * f(s * dt, u));
    worst = std::max(worst, k.distance(raw) / dt);
    u = k.project(raw);
  }
  return worst;
}

}  // namespace cdeg
