#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "profinite/cylinder.hpp"
#include "profinite/tensor.hpp"

namespace profinite {

/// A family of r-form fields ω_J on the levels, meant to satisfy
/// ω_I = (i_I^K)^* ω_K. Nothing is assumed: check_tame measures it.
class TameForm {
 public:
  using LevelFn = std::function<FormField(const Index&)>;

  TameForm(FamilyPtr family, int degree, LevelFn level);

  const FamilyPtr& family() const { return family_; }
  int degree() const { return degree_; }
  /// ω_J; throws DimensionMismatch if the field has the wrong shape.
  FormField level(const Index& j) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<Index, FormField> fields;
  };
  FamilyPtr family_;
  int degree_;
  LevelFn level_;
  std::shared_ptr<Cache> cache_;
};

/// (i_I^K)^* ω_K evaluated at a point of level I.
AltTensor pullback_inj(const TameForm& form, const Index& lower, const Index& upper, const Vector& point);

/// (π_I^K)^* α for a field α on level I: a field on level K.
FormField pushforward_proj(const FamilyPtr& family, const FormField& alpha, const Index& lower, const Index& upper);

/// Pointwise version at a point of level K.
AltTensor pushforward_proj(const FamilyPtr& family, const FormField& alpha, const Index& lower, const Index& upper,
                           const Vector& point);

/// Max residual of (i_I^K)^* ω_K − ω_I at random points of level I.
Report check_tame(const TameForm& form, std::span<const std::pair<Index, Index>> pairs, int samples_per_pair,
                  double tol, std::uint64_t seed = 0);

/// Level-wise d; exact for polynomial fields, central differences otherwise.
TameForm exterior_derivative(const TameForm& form);

enum class MetricType { Riemannian, PseudoRiemannian, Hermitian, PseudoHermitian };

std::string to_string(MetricType type);

/// Standard complex structure on R^{2n}: (x_{2k}, x_{2k+1}) ↦ (-x_{2k+1}, x_{2k}).
Matrix complex_structure(int dim);

/// Per-level symmetric bilinear forms, Gram matrix in canonical coordinates.
/// Hermitian types live on even-dimensional levels and must also commute
/// with complex_structure.
struct CompatibleMetric {
  FamilyPtr family;
  MetricType type;
  std::function<Matrix(const Index&, const Vector&)> gram;
};

struct LevelSpectrum {
  Index level;
  double min_eigenvalue;
  double max_eigenvalue;
  int rank;
  int dim;
};

struct MetricReport {
  Report report;                        // compatibility, symmetry, complex-structure residuals
  std::vector<LevelSpectrum> spectra;   // extreme eigenvalues over the samples, per level
  bool positive_definite = true;        // every sampled Gram matrix
  bool nondegenerate = true;            // every sampled Gram matrix has full rank
  bool passed() const;                  // compatible, plus definiteness for the definite types
};

/// Rank with singular values below 1e-10 · (largest singular value) counted as zero.
int numerical_rank(const Matrix& m);

MetricReport metric_check(const CompatibleMetric& g, std::span<const std::pair<Index, Index>> pairs,
                          std::span<const Index> levels, int samples, double tol, std::uint64_t seed = 0);

/// A tangent vector along a thread: v_J ∈ T_{x_J} E_J for every J.
struct TangentThread {
  Thread base;
  std::function<Vector(const Index&)> vector;
};

/// Max residual of v_J − Dπ_J^K(x_K) v_K over the pairs.
Report check_tangent_thread(const TangentThread& v, std::span<const std::pair<Index, Index>> pairs, double tol);

/// The thread s ↦ x + s v (a thread whenever the family's maps are linear).
Thread displaced_thread(const TangentThread& v, double s);

/// |⟨df, v⟩ − FD directional derivative of eval(f, ·) along v| / max(1, |⟨df, v⟩|).
double tangent_duality_check(const CylindricalFunction& f, const TangentThread& v);

}  // namespace profinite
