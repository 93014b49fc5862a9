#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "profinite/diffmap.hpp"

namespace profinite {

/// Strictly increasing r-subsets of {0, ..., dim-1} in lexicographic order.
std::vector<std::vector<int>> increasing_multi_indices(int dim, int r);

/// Dense antisymmetric r-linear form on R^dim, stored as the full dim^r
/// component array (slot 0 most significant).
class AltTensor {
 public:
  AltTensor(int degree, int dim);

  /// dx_{i1} ∧ ... ∧ dx_{ir} on R^dim, indices strictly increasing.
  static AltTensor basis(int dim, const std::vector<int>& indices);
  /// The 2-form with antisymmetric component matrix `m`.
  static AltTensor from_matrix(const Matrix& m);

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  double operator()(const std::vector<int>& idx) const { return data_[offset(idx)]; }
  /// Sets the component on an increasing multi-index and all its permutations.
  void set(const std::vector<int>& increasing, double value);

  /// φ*ω for a linear map with Jacobian `jac` (dim × n): contracts every slot.
  AltTensor pullback(const Matrix& jac) const;
  /// Value on r vectors.
  double evaluate(const std::vector<Vector>& vectors) const;
  /// Component matrix ω(e_a, e_b); degree must be 2.
  Matrix as_matrix() const;
  double max_abs() const;

  AltTensor& operator+=(const AltTensor& o);
  AltTensor& operator-=(const AltTensor& o);
  AltTensor& operator*=(double s);
  friend AltTensor operator+(AltTensor a, const AltTensor& b) { return a += b; }
  friend AltTensor operator-(AltTensor a, const AltTensor& b) { return a -= b; }
  friend AltTensor operator*(double s, AltTensor a) { return a *= s; }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t offset(const std::vector<int>& idx) const;

  int degree_;
  int dim_;
  std::vector<double> data_;
};

/// Max-norm distance between tensors; +inf on shape mismatch.
double max_abs_diff(const AltTensor& a, const AltTensor& b);

/// Sparse multivariate polynomial with real coefficients.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  void add_term(const Exponents& e, double c);

  double operator()(const Vector& x) const;
  Polynomial derivative(int i) const;
  /// p(M y) for an nvars × n matrix M.
  Polynomial compose_linear(const Matrix& m) const;
  Polynomial pow(int k) const;

  bool is_zero() const { return terms_.empty(); }
  double max_abs_coeff() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    Polynomial nb = b;
    nb *= -1.0;
    return a += nb;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

 private:
  int nvars_;
  std::map<Exponents, double> terms_;  // zero coefficients are never stored
};

/// Polynomial components of a form, keyed by increasing multi-index.
using PolyComponents = std::map<std::vector<int>, Polynomial>;

/// A smooth r-form field on one level R^dim.
///
/// Polynomial fields carry their coefficients, so d and linear pullbacks are
/// exact; other fields are black boxes differentiated by central differences.
class FormField {
 public:
  using Fn = std::function<AltTensor(const Vector&)>;

  FormField(int degree, int dim, Fn fn);
  FormField(int degree, int dim, PolyComponents components);

  static FormField zero(int degree, int dim);
  static FormField constant(const AltTensor& value);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  bool is_polynomial() const { return static_cast<bool>(poly_); }
  const PolyComponents& components() const;

  AltTensor operator()(const Vector& x) const;

  /// Coordinate exterior derivative (exact on polynomial fields).
  FormField exterior_derivative() const;
  /// Pullback along a map into this level; polynomial fields stay polynomial
  /// along linear maps.
  FormField pullback(const DifferentiableMap& f) const;

 private:
  int degree_;
  int dim_;
  Fn fn_;
  std::shared_ptr<const PolyComponents> poly_;
};

}  // namespace profinite
