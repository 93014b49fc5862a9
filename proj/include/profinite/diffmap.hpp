#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace profinite {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Central-difference step for coordinate value `x`: 1e-5 * (1 + |x|).
inline double fd_step(double x) { return 1e-5 * (1.0 + std::abs(x)); }

/// Central-difference Jacobian of `f` at `x` (codomain dimension `out`).
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, int out);

/// A smooth map between coordinate spaces R^n -> R^m, the operational stand-in
/// for a morphism of manifolds. Linear maps remember their matrix so that
/// composites and tangent lifts stay exact.
class DifferentiableMap {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  DifferentiableMap(int domain_dim, int codomain_dim, EvalFn eval, JacobianFn jacobian = {});

  static DifferentiableMap linear(Matrix m);
  static DifferentiableMap identity(int n);

  int domain_dim() const { return domain_dim_; }
  int codomain_dim() const { return codomain_dim_; }

  /// Throws DimensionMismatch when `x` does not live in the domain.
  Vector operator()(const Vector& x) const;
  /// Analytic Jacobian when one was supplied, central differences otherwise.
  Matrix jacobian(const Vector& x) const;
  Matrix fd_jacobian(const Vector& x) const;

  bool has_analytic_jacobian() const { return static_cast<bool>(jacobian_) || matrix_.has_value(); }
  const std::optional<Matrix>& matrix() const { return matrix_; }

 private:
  int domain_dim_;
  int codomain_dim_;
  EvalFn eval_;
  JacobianFn jacobian_;
  std::optional<Matrix> matrix_;
};

/// outer ∘ inner.
DifferentiableMap compose(const DifferentiableMap& outer, const DifferentiableMap& inner);

/// (x, y) ↦ (f(x), g(y)) on the concatenated coordinates.
DifferentiableMap direct_sum(const DifferentiableMap& f, const DifferentiableMap& g);

/// Max entrywise deviation of the map's Jacobian from its FD Jacobian, divided
/// by max(1, max |entry|).
double jacobian_relative_error(const DifferentiableMap& f, const Vector& x);

/// Max-norm of a - b, +inf on size mismatch.
double max_abs_diff(const Vector& a, const Vector& b);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace profinite
