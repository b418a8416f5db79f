#include "cdeg/linear_operator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace cdeg {

namespace {

constexpr double kSymmetryTol = 1e-14;

bool is_symmetric(const Matrix& a) {
  const double scale = 1.0 + a.cwiseAbs().maxCoeff();
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol * scale;
}

// (e^{lambda t} - 1) / lambda, continuous through lambda = 0.
double phi1(double lambda, double t) {
  const double z = lambda * t;
  if (std::abs(z) < 1e-300) return t;
  return std::expm1(z) / lambda;
}

}  // namespace

LinearOperator::LinearOperator(Matrix a, double growth_m, double growth_omega)
    : a_(std::move(a)), growth_m_(growth_m), growth_omega_(growth_omega) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) throw InvalidInput("generator must be a nonempty square matrix");
  if (!a_.allFinite()) throw InvalidInput("generator has non-finite entries");
  if (!(growth_m_ >= 1.0) || !std::isfinite(growth_m_)) throw InvalidInput("growth_M must be >= 1");
  if (!std::isfinite(growth_omega_)) throw InvalidInput("growth_omega must be finite");

  symmetric_ = is_symmetric(a_);
  if (symmetric_) {
    const Matrix sym = 0.5 * (a_ + a_.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    eigvals_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
    const double top = eigvals_.maxCoeff();
    if (growth_omega_ < top - 1e-10 * (1.0 + std::abs(top))) {
      std::ostringstream os;
      os << "growth_omega " << growth_omega_ << " below largest eigenvalue " << top;
      throw InvalidInput(os.str());
    }
  } else {
    // No closed-form bound; sample ||S(t)||_2 on [0, 1].
    for (int k = 1; k <= 20; ++k) {
      const double t = 0.05 * k;
      const Matrix s = (t * a_).exp();
      const double norm = Eigen::JacobiSVD<Matrix>(s).singularValues()(0);
      const double bound = growth_m_ * std::exp(growth_omega_ * t);
      if (norm > bound * (1.0 + 1e-9) + 1e-12) {
        std::ostringstream os;
        os << "growth bound violated at t=" << t << ": ||S(t)||=" << norm << " > " << bound;
        throw InvalidInput(os.str());
      }
    }
  }
}

Matrix LinearOperator::semigroup_matrix(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("semigroup time must be finite and >= 0");
  const auto n = dim();
  if (t == 0.0) return Matrix::Identity(n, n);
  if (symmetric_) {
    const Vector e = (t * eigvals_).array().exp();
    return eigvecs_ * e.asDiagonal() * eigvecs_.transpose();
  }
  return (t * a_).exp();
}

LinearOperator LinearOperator::scaled(double s) const {
  if (!(s >= 0.0)) throw InvalidInput("operator scale must be >= 0");
  return LinearOperator(s * a_, growth_m_, s * growth_omega_);
}

LinearOperator dirichlet_laplacian_1d(int m) {
  if (m < 1) throw InvalidInput("dirichlet_laplacian_1d: m must be >= 1");
  const double scale = static_cast<double>(m + 1) * (m + 1);
  Matrix a = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = -2.0 * scale;
    if (i > 0) a(i, i - 1) = scale;
    if (i + 1 < m) a(i, i + 1) = scale;
  }
  // Largest eigenvalue is negative, so omega = 0 is a valid bound with M = 1.
  return LinearOperator(std::move(a), 1.0, 0.0);
}

LinearOperator diag_operator(const Vector& values) {
  if (values.size() == 0) throw InvalidInput("diag: empty");
  return LinearOperator(values.asDiagonal().toDenseMatrix(), 1.0, values.maxCoeff());
}

LinearOperator zero_operator(int n) {
  if (n < 1) throw InvalidInput("zero operator: n must be >= 1");
  return LinearOperator(Matrix::Zero(n, n), 1.0, 0.0);
}

Resolvent::Resolvent(const LinearOperator& op, double h) : h_(h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("resolvent step h must be positive");
  if (h * op.growth_omega() >= 1.0) {
    std::ostringstream os;
    os << "resolvent undefined: h*omega = " << h * op.growth_omega() << " >= 1";
    throw DomainError(os.str());
  }
  const auto n = op.dim();
  i_minus_ha_ = Matrix::Identity(n, n) - h * op.matrix();
  lu_.compute(i_minus_ha_);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-12)) {
    std::ostringstream os;
    os << "I - hA is numerically singular (condition estimate " << (rcond_ > 0 ? 1.0 / rcond_ : INFINITY) << ")";
    throw NumericalError(os.str());
  }
}

Vector Resolvent::apply(const Vector& x) const {
  require_dim(x, i_minus_ha_.rows(), "resolvent_apply");
  Vector y = lu_.solve(x);
  const Vector r = x - i_minus_ha_ * y;
  y += lu_.solve(r);
  return y;
}

void ForcingSignal::validate(Eigen::Index n) const {
  if (grid.empty() || grid.size() != values.size()) throw InvalidInput("forcing: grid and values must have equal nonzero length");
  if (grid.front() != 0.0) throw InvalidInput("forcing: grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw InvalidInput("forcing: grid must be strictly increasing");
  }
  if (grid.back() > 1.0) throw InvalidInput("forcing: grid must end at or before 1");
  for (const auto& v : values) {
    require_dim(v, n, "forcing value");
    require_finite(v, "forcing value");
  }
}

Vector semigroup_apply(const LinearOperator& op, double t, const Vector& x) {
  require_dim(x, op.dim(), "semigroup_apply");
  require_finite(x, "semigroup_apply");
  if (t == 0.0) return x;
  return op.semigroup_matrix(t) * x;
}

Vector resolvent_apply(const LinearOperator& op, double h, const Vector& x) {
  require_finite(x, "resolvent_apply");
  return Resolvent(op, h).apply(x);
}

double resolvent_identity_residual(const LinearOperator& op, double a, double b, const Vector& x) {
  require_finite(x, "resolvent_identity_residual");
  const Resolvent ja(op, a);
  const Resolvent jb(op, b);
  const Vector jbx = jb.apply(x);
  const Vector rhs = ja.apply((a / b) * x + ((b - a) / b) * jbx);
  return (jbx - rhs).norm();
}

namespace {

// \int_0^d S(s) w ds, exact.
Vector segment_integral(const LinearOperator& op, double d, const Vector& w) {
  const auto n = op.dim();
  if (op.symmetric()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (op.matrix() + op.matrix().transpose()));
    Vector coeff = es.eigenvectors().transpose() * w;
    for (Eigen::Index i = 0; i < n; ++i) coeff[i] *= phi1(es.eigenvalues()[i], d);
    return es.eigenvectors() * coeff;
  }
  // exp of [[A, w], [0, 0]] * d carries the integral in its last column.
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = op.matrix();
  aug.topRightCorner(n, 1) = w;
  const Matrix e = (d * aug).exp();
  return e.topRightCorner(n, 1);
}

}  // namespace

Vector duhamel(const LinearOperator& op, const Vector& x, const ForcingSignal& w, double t) {
  require_dim(x, op.dim(), "duhamel");
  require_finite(x, "duhamel");
  w.validate(op.dim());
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("duhamel: t outside the forcing grid span [0, 1]");
  Vector u = semigroup_apply(op, t, x);
  for (std::size_t k = 0; k < w.grid.size(); ++k) {
    const double start = w.grid[k];
    if (start >= t) break;
    const double stop = std::min(k + 1 < w.grid.size() ? w.grid[k + 1] : 1.0, t);
    if (w.values[k].isZero(0.0)) continue;
    u += semigroup_apply(op, t - stop, segment_integral(op, stop - start, w.values[k]));
  }
  return u;
}

}  // namespace cdeg
