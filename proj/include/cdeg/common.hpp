#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace cdeg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Single-valued field f(t, x).
using VectorField = std::function<Vector(double, const Vector&)>;

/// Autonomous self-map x -> f(x).
using PointMap = std::function<Vector(const Vector&)>;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class TangencyViolation : public Error {
 public:
  TangencyViolation(const std::string& what, double t, Vector x)
      : Error(what), t_(t), x_(std::move(x)) {}
  double t() const { return t_; }
  const Vector& x() const { return x_; }

 private:
  double t_;
  Vector x_;
};

class ZeroOnBoundary : public Error {
 public:
  ZeroOnBoundary(const std::string& what, Vector where, double residual)
      : Error(what), where_(std::move(where)), residual_(residual) {}
  const Vector& where() const { return where_; }
  double residual() const { return residual_; }

 private:
  Vector where_;
  double residual_;
};

class Inconclusive : public Error {
 public:
  using Error::Error;
};

bool all_finite(const Vector& x);
void require_finite(const Vector& x, const char* what);
void require_dim(const Vector& x, Eigen::Index n, const char* what);
std::string format_vector(const Vector& x);

}  // namespace cdeg
