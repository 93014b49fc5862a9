#include "profinite/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "profinite/errors.hpp"

namespace profinite {

std::vector<std::vector<int>> increasing_multi_indices(int dim, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > dim) return out;
  std::vector<int> cur(r);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == dim - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

int parity(const std::vector<int>& perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

// Contract tensor slot `slot` (extent `from`) with jac (from × to).
std::vector<double> contract_slot(const std::vector<double>& t, const std::vector<int>& shape, int slot,
                                  const Matrix& jac) {
  std::size_t outer = 1, inner = 1;
  for (int s = 0; s < slot; ++s) outer *= shape[s];
  for (std::size_t s = slot + 1; s < shape.size(); ++s) inner *= shape[s];
  const int from = shape[slot];
  const int to = static_cast<int>(jac.cols());
  std::vector<double> out(outer * to * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o)
    for (int b = 0; b < from; ++b)
      for (int a = 0; a < to; ++a) {
        const double w = jac(b, a);
        if (w == 0.0) continue;
        const double* src = &t[(o * from + b) * inner];
        double* dst = &out[(o * to + a) * inner];
        for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
      }
  return out;
}

}  // namespace

AltTensor::AltTensor(int degree, int dim) : degree_(degree), dim_(dim), data_(ipow(dim, degree), 0.0) {
  if (degree < 0 || dim < 0) throw std::invalid_argument("negative tensor shape");
}

AltTensor AltTensor::basis(int dim, const std::vector<int>& indices) {
  AltTensor t(static_cast<int>(indices.size()), dim);
  t.set(indices, 1.0);
  return t;
}

AltTensor AltTensor::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("2-form matrix must be square");
  AltTensor t(2, static_cast<int>(m.rows()));
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) t.data_[t.offset({a, b})] = m(a, b);
  return t;
}

std::size_t AltTensor::offset(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != degree_) throw DimensionMismatch("wrong number of tensor indices");
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw DimensionMismatch("tensor index out of range");
    off = off * dim_ + i;
  }
  return off;
}

void AltTensor::set(const std::vector<int>& increasing, double value) {
  if (!std::is_sorted(increasing.begin(), increasing.end()) ||
      std::adjacent_find(increasing.begin(), increasing.end()) != increasing.end())
    throw std::invalid_argument("AltTensor::set needs a strictly increasing multi-index");
  std::vector<int> perm(increasing.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> idx(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) idx[i] = increasing[perm[i]];
    data_[offset(idx)] = parity(perm) * value;
  } while (std::next_permutation(perm.begin(), perm.end()));
}

AltTensor AltTensor::pullback(const Matrix& jac) const {
  if (jac.rows() != dim_) throw DimensionMismatch("pullback Jacobian has wrong row count");
  const int n = static_cast<int>(jac.cols());
  std::vector<int> shape(degree_, dim_);
  std::vector<double> cur = data_;
  for (int s = 0; s < degree_; ++s) {
    cur = contract_slot(cur, shape, s, jac);
    shape[s] = n;
  }
  AltTensor out(degree_, n);
  out.data_ = std::move(cur);
  return out;
}

double AltTensor::evaluate(const std::vector<Vector>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) throw DimensionMismatch("wrong number of vectors");
  Matrix cols(dim_, degree_);
  for (int i = 0; i < degree_; ++i) {
    if (vectors[i].size() != dim_) throw DimensionMismatch("vector has the wrong dimension");
    cols.col(i) = vectors[i];
  }
  AltTensor p = pullback(cols);
  std::vector<int> idx(degree_);
  std::iota(idx.begin(), idx.end(), 0);
  return degree_ == 0 ? p.data_[0] : p(idx);
}

Matrix AltTensor::as_matrix() const {
  if (degree_ != 2) throw DimensionMismatch("as_matrix needs a 2-form");
  Matrix m(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) m(a, b) = data_[static_cast<std::size_t>(a) * dim_ + b];
  return m;
}

double AltTensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

AltTensor& AltTensor::operator+=(const AltTensor& o) {
  if (o.degree_ != degree_ || o.dim_ != dim_) throw DimensionMismatch("adding tensors of different shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

AltTensor& AltTensor::operator-=(const AltTensor& o) {
  if (o.degree_ != degree_ || o.dim_ != dim_) throw DimensionMismatch("subtracting tensors of different shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

AltTensor& AltTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double max_abs_diff(const AltTensor& a, const AltTensor& b) {
  if (a.degree() != b.degree() || a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// ----------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e.at(i) = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const Exponents& e, double c) {
  if (static_cast<int>(e.size()) != nvars_) throw DimensionMismatch("monomial has the wrong arity");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::operator()(const Vector& x) const {
  if (x.size() != nvars_) throw DimensionMismatch("polynomial evaluated at a point of the wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= x[i];
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    --d[i];
    out.add_term(d, c * e[i]);
  }
  return out;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial out = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

Polynomial Polynomial::compose_linear(const Matrix& m) const {
  if (m.rows() != nvars_) throw DimensionMismatch("linear substitution has the wrong row count");
  const int n = static_cast<int>(m.cols());
  std::vector<Polynomial> images;
  for (int b = 0; b < nvars_; ++b) {
    Polynomial lin(n);
    for (int a = 0; a < n; ++a) {
      Exponents e(n, 0);
      e[a] = 1;
      lin.add_term(e, m(b, a));
    }
    images.push_back(std::move(lin));
  }
  Polynomial out(n);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(n, c);
    for (int b = 0; b < nvars_; ++b)
      if (e[b]) term = term * images[b].pow(e[b]);
    out += term;
  }
  return out;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.nvars_ != nvars_) throw DimensionMismatch("adding polynomials in different variables");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw DimensionMismatch("multiplying polynomials in different variables");
  Polynomial out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

// ------------------------------------------------------------------ FormField

FormField::FormField(int degree, int dim, Fn fn) : degree_(degree), dim_(dim), fn_(std::move(fn)) {}

FormField::FormField(int degree, int dim, PolyComponents components) : degree_(degree), dim_(dim) {
  for (const auto& [idx, p] : components) {
    if (static_cast<int>(idx.size()) != degree) throw DimensionMismatch("component of the wrong degree");
    if (p.nvars() != dim) throw DimensionMismatch("coefficient polynomial in the wrong number of variables");
  }
  poly_ = std::make_shared<const PolyComponents>(std::move(components));
}

FormField FormField::zero(int degree, int dim) { return FormField(degree, dim, PolyComponents{}); }

FormField FormField::constant(const AltTensor& value) {
  PolyComponents comps;
  for (const auto& idx : increasing_multi_indices(value.dim(), value.degree())) {
    const double c = value(idx);
    if (c != 0.0) comps.emplace(idx, Polynomial::constant(value.dim(), c));
  }
  return FormField(value.degree(), value.dim(), std::move(comps));
}

const PolyComponents& FormField::components() const {
  if (!poly_) throw std::logic_error("form field has no polynomial coefficients");
  return *poly_;
}

AltTensor FormField::operator()(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch("form evaluated at a point of the wrong dimension");
  if (!poly_) {
    AltTensor t = fn_(x);
    if (t.degree() != degree_ || t.dim() != dim_) throw DimensionMismatch("form field returned the wrong shape");
    return t;
  }
  AltTensor t(degree_, dim_);
  for (const auto& [idx, p] : *poly_) t.set(idx, p(x));
  return t;
}

FormField FormField::exterior_derivative() const {
  const int r = degree_;
  if (poly_) {
    PolyComponents out;
    for (const auto& idx : increasing_multi_indices(dim_, r + 1)) {
      Polynomial acc(dim_);
      for (int k = 0; k <= r; ++k) {
        std::vector<int> rest;
        for (int m = 0; m <= r; ++m)
          if (m != k) rest.push_back(idx[m]);
        auto it = poly_->find(rest);
        if (it == poly_->end()) continue;
        Polynomial d = it->second.derivative(idx[k]);
        acc += (k % 2 == 0 ? 1.0 : -1.0) * d;
      }
      if (!acc.is_zero()) out.emplace(idx, std::move(acc));
    }
    return FormField(r + 1, dim_, std::move(out));
  }
  FormField self = *this;
  const int n = dim_;
  return FormField(r + 1, n, [self, r, n](const Vector& x) {
    std::vector<AltTensor> partials;
    Vector probe = x;
    for (int a = 0; a < n; ++a) {
      const double h = fd_step(x[a]);
      probe[a] = x[a] + h;
      AltTensor up = self(probe);
      probe[a] = x[a] - h;
      AltTensor down = self(probe);
      probe[a] = x[a];
      partials.push_back((1.0 / (2.0 * h)) * (up - down));
    }
    AltTensor out(r + 1, n);
    for (const auto& idx : increasing_multi_indices(n, r + 1)) {
      double acc = 0.0;
      for (int k = 0; k <= r; ++k) {
        std::vector<int> rest;
        for (int m = 0; m <= r; ++m)
          if (m != k) rest.push_back(idx[m]);
        acc += (k % 2 == 0 ? 1.0 : -1.0) * partials[idx[k]](rest);
      }
      out.set(idx, acc);
    }
    return out;
  });
}

FormField FormField::pullback(const DifferentiableMap& f) const {
  if (f.codomain_dim() != dim_) throw DimensionMismatch("pullback along a map into the wrong level");
  const int n = f.domain_dim();
  if (poly_ && f.matrix()) {
    const Matrix& m = *f.matrix();
    PolyComponents out;
    const auto targets = increasing_multi_indices(n, degree_);
    for (const auto& [b, p] : *poly_) {
      Polynomial composed = p.compose_linear(m);
      for (const auto& a : targets) {
        Matrix minor(degree_, degree_);
        for (int i = 0; i < degree_; ++i)
          for (int j = 0; j < degree_; ++j) minor(i, j) = m(b[i], a[j]);
        const double det = degree_ == 0 ? 1.0 : minor.determinant();
        if (det == 0.0) continue;
        Polynomial term = det * composed;
        auto [it, inserted] = out.emplace(a, term);
        if (!inserted) it->second += term;
      }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return FormField(degree_, n, std::move(out));
  }
  FormField self = *this;
  return FormField(degree_, n, [self, f](const Vector& x) { return self(f(x)).pullback(f.jacobian(x)); });
}

}  // namespace profinite
