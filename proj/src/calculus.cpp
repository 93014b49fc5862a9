#include "profinite/calculus.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "profinite/errors.hpp"

namespace profinite {

TameForm::TameForm(FamilyPtr family, int degree, LevelFn level)
    : family_(std::move(family)), degree_(degree), level_(std::move(level)), cache_(std::make_shared<Cache>()) {}

FormField TameForm::level(const Index& j) const {
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->fields.find(j); it != cache_->fields.end()) return it->second;
  }
  FormField f = level_(j);
  if (f.degree() != degree_ || f.dim() != family_->dim(j))
    throw DimensionMismatch("form field at " + family_->poset().label(j) + " has the wrong shape");
  std::lock_guard lock(cache_->mutex);
  return cache_->fields.emplace(j, std::move(f)).first->second;
}

AltTensor pullback_inj(const TameForm& form, const Index& lower, const Index& upper, const Vector& point) {
  auto i = form.family()->inj(lower, upper);
  return form.level(upper)(i(point)).pullback(i.jacobian(point));
}

FormField pushforward_proj(const FamilyPtr& family, const FormField& alpha, const Index& lower, const Index& upper) {
  if (alpha.dim() != family->dim(lower)) throw DimensionMismatch("form does not live on the lower level");
  return alpha.pullback(family->proj(lower, upper));
}

AltTensor pushforward_proj(const FamilyPtr& family, const FormField& alpha, const Index& lower, const Index& upper,
                           const Vector& point) {
  return pushforward_proj(family, alpha, lower, upper)(point);
}

Report check_tame(const TameForm& form, std::span<const std::pair<Index, Index>> pairs, int samples_per_pair,
                  double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  for (const auto& [i, k] : pairs) {
    auto lower = form.level(i);
    for (int s = 0; s < samples_per_pair; ++s) {
      Vector x = random_point(form.family()->dim(i), rng);
      report.record("tame_compatibility", max_abs_diff(pullback_inj(form, i, k, x), lower(x)), tol);
    }
  }
  return report;
}

TameForm exterior_derivative(const TameForm& form) {
  TameForm src = form;
  return TameForm(form.family(), form.degree() + 1,
                  [src](const Index& j) { return src.level(j).exterior_derivative(); });
}

std::string to_string(MetricType type) {
  switch (type) {
    case MetricType::Riemannian: return "riemannian";
    case MetricType::PseudoRiemannian: return "pseudo-riemannian";
    case MetricType::Hermitian: return "hermitian";
    case MetricType::PseudoHermitian: return "pseudo-hermitian";
  }
  return "unknown";
}

Matrix complex_structure(int dim) {
  if (dim % 2 != 0) throw DimensionMismatch("complex structure needs an even dimension");
  Matrix j = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; k += 2) {
    j(k + 1, k) = 1.0;
    j(k, k + 1) = -1.0;
  }
  return j;
}

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * top) ++rank;
  return rank;
}

bool MetricReport::passed() const { return report.passed(); }

MetricReport metric_check(const CompatibleMetric& g, std::span<const std::pair<Index, Index>> pairs,
                          std::span<const Index> levels, int samples, double tol, std::uint64_t seed) {
  MetricReport out;
  std::mt19937_64 rng(seed);
  const bool hermitian = g.type == MetricType::Hermitian || g.type == MetricType::PseudoHermitian;
  const bool definite = g.type == MetricType::Riemannian || g.type == MetricType::Hermitian;
  const auto& family = *g.family;
  for (const auto& [i, k] : pairs) {
    auto inj = family.inj(i, k);
    for (int s = 0; s < samples; ++s) {
      Vector x = random_point(family.dim(i), rng);
      Matrix d = inj.jacobian(x);
      Matrix pulled = d.transpose() * g.gram(k, inj(x)) * d;
      out.report.record("metric_compatibility", max_abs_diff(pulled, g.gram(i, x)), tol);
    }
  }
  for (const auto& j : levels) {
    const int n = family.dim(j);
    LevelSpectrum spectrum{j, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), n, n};
    for (int s = 0; s < samples; ++s) {
      Matrix gram = g.gram(j, random_point(n, rng));
      if (gram.rows() != n || gram.cols() != n) throw DimensionMismatch("Gram matrix of the wrong size");
      out.report.record("symmetry", max_abs_diff(gram, Matrix(gram.transpose())), tol);
      if (hermitian) {
        Matrix cs = complex_structure(n);
        out.report.record("complex_structure_invariance", max_abs_diff(Matrix(cs.transpose() * gram * cs), gram), tol);
      }
      if (n == 0) continue;
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (gram + gram.transpose()));
      spectrum.min_eigenvalue = std::min(spectrum.min_eigenvalue, eig.eigenvalues().minCoeff());
      spectrum.max_eigenvalue = std::max(spectrum.max_eigenvalue, eig.eigenvalues().maxCoeff());
      spectrum.rank = std::min(spectrum.rank, numerical_rank(gram));
    }
    if (n > 0 && !(spectrum.min_eigenvalue > 0.0)) out.positive_definite = false;
    if (spectrum.rank < n) out.nondegenerate = false;
    out.spectra.push_back(spectrum);
  }
  if (definite) out.report.record_verdict("positive_definite", out.positive_definite);
  return out;
}

Report check_tangent_thread(const TangentThread& v, std::span<const std::pair<Index, Index>> pairs, double tol) {
  Report report;
  const auto& family = *v.base.family();
  for (const auto& [j, k] : pairs) {
    Matrix d = family.proj(j, k).jacobian(v.base(k));
    report.record("tangent_transport", max_abs_diff(Vector(d * v.vector(k)), v.vector(j)), tol);
  }
  return report;
}

Thread displaced_thread(const TangentThread& v, double s) {
  Thread base = v.base;
  auto vec = v.vector;
  return Thread(base.family(), [base, vec, s](const Index& j) -> Vector { return base(j) + s * vec(j); });
}

double tangent_duality_check(const CylindricalFunction& f, const TangentThread& v) {
  const Vector grad = differential(f, v.base);
  Vector dir(f.section_dim());
  int off = 0;
  for (const auto& m : f.section().members()) {
    Vector vm = v.vector(m);
    dir.segment(off, vm.size()) = vm;
    off += static_cast<int>(vm.size());
  }
  const double analytic = grad.dot(dir);
  const Vector at = f.gather(v.base);
  const double xs = at.size() ? at.cwiseAbs().maxCoeff() : 0.0;
  const double vs = dir.size() ? dir.cwiseAbs().maxCoeff() : 0.0;
  const double h = 1e-5 * (1.0 + xs) / std::max(1.0, vs);
  const double fd = (eval(f, displaced_thread(v, h)) - eval(f, displaced_thread(v, -h))) / (2.0 * h);
  return std::abs(analytic - fd) / std::max(1.0, std::abs(analytic));
}

}  // namespace profinite
