#pragma once

#include "cdeg/common.hpp"

#include <Eigen/LU>

#include <optional>
#include <vector>

namespace cdeg {

/// Generator A of the linear part together with growth metadata for
/// ||S(t)|| <= M e^{omega t}. Immutable after construction; the spectral
/// data used for symmetric generators is computed eagerly.
class LinearOperator {
 public:
  LinearOperator(Matrix a, double growth_m, double growth_omega);

  Eigen::Index dim() const { return a_.rows(); }
  const Matrix& matrix() const { return a_; }
  double growth_m() const { return growth_m_; }
  double growth_omega() const { return growth_omega_; }
  bool symmetric() const { return symmetric_; }

  /// Matrix of S(t) = exp(tA).
  Matrix semigroup_matrix(double t) const;

  /// Same generator scaled by s (growth omega scales with it when s >= 0).
  LinearOperator scaled(double s) const;

 private:
  Matrix a_;
  double growth_m_;
  double growth_omega_;
  bool symmetric_;
  Matrix eigvecs_;
  Vector eigvals_;
};

LinearOperator dirichlet_laplacian_1d(int m);
LinearOperator diag_operator(const Vector& values);
LinearOperator zero_operator(int n);

/// Factored J_h = (I - hA)^{-1} for a fixed h. Construct once per run.
class Resolvent {
 public:
  Resolvent(const LinearOperator& op, double h);

  Vector apply(const Vector& x) const;
  double h() const { return h_; }
  double reciprocal_condition() const { return rcond_; }

 private:
  Matrix i_minus_ha_;
  Eigen::PartialPivLU<Matrix> lu_;
  double h_;
  double rcond_;
};

/// Piecewise-constant forcing; values[k] applies on [grid[k], grid[k+1]) and
/// the last value on [grid.back(), 1].
struct ForcingSignal {
  std::vector<double> grid;
  std::vector<Vector> values;

  void validate(Eigen::Index n) const;
};

Vector semigroup_apply(const LinearOperator& op, double t, const Vector& x);
Vector resolvent_apply(const LinearOperator& op, double h, const Vector& x);
double resolvent_identity_residual(const LinearOperator& op, double a, double b, const Vector& x);
Vector duhamel(const LinearOperator& op, const Vector& x, const ForcingSignal& w, double t);

}  // namespace cdeg
