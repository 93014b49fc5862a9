#include "profinite/diffmap.hpp"

#include <limits>
#include <string>

#include "profinite/errors.hpp"

namespace profinite {

Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, int out) {
  Matrix jac(out, x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x[i]);
    probe[i] = x[i] + h;
    Vector up = f(probe);
    probe[i] = x[i] - h;
    Vector down = f(probe);
    probe[i] = x[i];
    jac.col(i) = (up - down) / (2.0 * h);
  }
  return jac;
}

DifferentiableMap::DifferentiableMap(int domain_dim, int codomain_dim, EvalFn eval, JacobianFn jacobian)
    : domain_dim_(domain_dim), codomain_dim_(codomain_dim), eval_(std::move(eval)), jacobian_(std::move(jacobian)) {
  if (domain_dim < 0 || codomain_dim < 0) throw DimensionMismatch("negative dimension");
}

DifferentiableMap DifferentiableMap::linear(Matrix m) {
  const int in = static_cast<int>(m.cols());
  const int out = static_cast<int>(m.rows());
  DifferentiableMap f(in, out, [m](const Vector& x) -> Vector { return m * x; });
  f.matrix_ = std::move(m);
  return f;
}

DifferentiableMap DifferentiableMap::identity(int n) { return linear(Matrix::Identity(n, n)); }

Vector DifferentiableMap::operator()(const Vector& x) const {
  if (x.size() != domain_dim_)
    throw DimensionMismatch("map expects dimension " + std::to_string(domain_dim_) + ", got " +
                            std::to_string(x.size()));
  Vector y = eval_(x);
  if (y.size() != codomain_dim_)
    throw DimensionMismatch("map declared codomain " + std::to_string(codomain_dim_) + ", produced " +
                            std::to_string(y.size()));
  return y;
}

Matrix DifferentiableMap::jacobian(const Vector& x) const {
  if (x.size() != domain_dim_)
    throw DimensionMismatch("jacobian expects dimension " + std::to_string(domain_dim_));
  if (matrix_) return *matrix_;
  if (jacobian_) return jacobian_(x);
  return fd_jacobian(x);
}

Matrix DifferentiableMap::fd_jacobian(const Vector& x) const {
  return profinite::fd_jacobian([this](const Vector& p) { return (*this)(p); }, x, codomain_dim_);
}

DifferentiableMap compose(const DifferentiableMap& outer, const DifferentiableMap& inner) {
  if (outer.domain_dim() != inner.codomain_dim())
    throw DimensionMismatch("cannot compose R^" + std::to_string(inner.codomain_dim()) + " into R^" +
                            std::to_string(outer.domain_dim()));
  if (outer.matrix() && inner.matrix()) return DifferentiableMap::linear(*outer.matrix() * *inner.matrix());
  return DifferentiableMap(
      inner.domain_dim(), outer.codomain_dim(), [outer, inner](const Vector& x) { return outer(inner(x)); },
      [outer, inner](const Vector& x) -> Matrix { return outer.jacobian(inner(x)) * inner.jacobian(x); });
}

DifferentiableMap direct_sum(const DifferentiableMap& f, const DifferentiableMap& g) {
  const int n = f.domain_dim(), m = g.domain_dim();
  const int p = f.codomain_dim(), q = g.codomain_dim();
  if (f.matrix() && g.matrix()) {
    Matrix block = Matrix::Zero(p + q, n + m);
    block.topLeftCorner(p, n) = *f.matrix();
    block.bottomRightCorner(q, m) = *g.matrix();
    return DifferentiableMap::linear(std::move(block));
  }
  return DifferentiableMap(
      n + m, p + q,
      [f, g, n, m, p, q](const Vector& x) -> Vector {
        Vector y(p + q);
        y << f(x.head(n)), g(x.tail(m));
        return y;
      },
      [f, g, n, m, p, q](const Vector& x) -> Matrix {
        Matrix block = Matrix::Zero(p + q, n + m);
        block.topLeftCorner(p, n) = f.jacobian(x.head(n));
        block.bottomRightCorner(q, m) = g.jacobian(x.tail(m));
        return block;
      });
}

double jacobian_relative_error(const DifferentiableMap& f, const Vector& x) {
  Matrix a = f.jacobian(x);
  Matrix b = f.fd_jacobian(x);
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace profinite
