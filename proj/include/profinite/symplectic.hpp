#pragma once

#include <optional>
#include <span>
#include <vector>

#include "profinite/calculus.hpp"

namespace profinite {

/// Level-wise bilinear data (a 2-form or a metric) seen as Gram matrices.
/// For a 2-form the matrix is Ω_J with ω_J(X, Y) = Xᵀ Ω_J Y.
struct BilinearFamily {
  FamilyPtr family;
  std::function<Matrix(const Index&, const Vector&)> matrix;
};

BilinearFamily bilinear_of(const TameForm& omega);
BilinearFamily bilinear_of(const CompatibleMetric& g);

struct LevelRank {
  Index level;
  int rank;
  int dim;
};

struct RankReport {
  std::vector<LevelRank> levels;  // minimum rank over the samples
  bool nondegenerate = true;
};

/// Full rank at every tested level and sample (numerical_rank threshold).
RankReport is_projectively_nondegenerate(const BilinearFamily& b, std::span<const Index> levels, int samples,
                                         std::uint64_t seed = 0);

struct WeakWitness {
  bool found = false;
  std::optional<Index> level;
  int basis = -1;  // index of the basis vector e_basis at the witness level
  double value = 0.0;
};

/// Searches the listed levels J ≥ I (in order) and basis vectors e_b for
/// b_J(Di(u), e_b) ≠ 0, evaluated at the injection of `base_point` (origin by
/// default). "Not found" only means no witness among the searched levels.
/// Throws ZeroVector when u = 0.
WeakWitness is_weakly_nondegenerate(const BilinearFamily& b, const Index& level, const Vector& u,
                                    std::span<const Index> search_levels,
                                    std::optional<Vector> base_point = std::nullopt);

/// A tame closed 2-form with its certificate: closedness residual of dω and
/// the rank profile per level.
struct SymplecticStructure {
  TameForm omega;
  Report certificate;
  RankReport ranks;
  bool presymplectic = false;  // closed and of constant rank on every level
  bool symplectic = false;     // presymplectic and projectively non-degenerate

  /// Measures dω and ranks on the given levels at `samples` random points.
  static SymplecticStructure certify(TameForm omega, std::span<const Index> levels, int samples,
                                     double closed_tol = 1e-9, std::uint64_t seed = 0);
};

/// Solves Ω_Jᵀ X = ∇H_J at `point` (so ω_J(X, ·) = dH_J). Throws SingularForm
/// when the level form is rank deficient there.
Vector hamiltonian_field(const TameForm& omega, const CylindricalFunction& h, const Index& level, const Vector& point);

/// max_k |ω_J(X, e_k) − ∂_k H_J| at `point`.
double defining_identity_residual(const TameForm& omega, const CylindricalFunction& h, const Index& level,
                                  const Vector& point, const Vector& field);

/// Residual of Dπ_J^K X_{H,K}(x) − X_{H,J}(π x) at random points of level K.
Report hamiltonian_compat_check(const TameForm& omega, const CylindricalFunction& h,
                                std::span<const std::pair<Index, Index>> pairs, int samples, double tol,
                                std::uint64_t seed = 0);

enum class FlowScheme { Leapfrog, ImplicitMidpoint };

struct Trajectory {
  double dt = 0.0;
  std::vector<Vector> states;    // initial point plus one state per step
  std::vector<double> energies;  // H at every state
};

/// Integrates X_H on one level. Leapfrog (kick-drift-kick) expects Darboux
/// coordinates (x_{2i}, x_{2i+1}) = (q_i, p_i) and a separable H; implicit
/// midpoint works for any non-degenerate level form and throws
/// NonconvergentSolve after 50 Newton iterations.
Trajectory flow(const TameForm& omega, const CylindricalFunction& h, const Index& level, const Vector& x0, double dt,
                int steps, FlowScheme scheme);

/// Linear action of a profinite family of matrix Lie groups. Algebra elements
/// are coefficient vectors over the per-level generator basis.
struct ProfiniteGroupAction {
  FamilyPtr family;
  std::function<std::vector<Matrix>(const Index&)> generators;
  /// Coefficients at `upper` ↦ coefficients at `lower`.
  std::function<Vector(const Index& lower, const Index& upper, const Vector&)> project_algebra;
  /// Coefficients at `lower` ↦ coefficients at `upper`.
  std::function<Vector(const Index& lower, const Index& upper, const Vector&)> inject_algebra;
};

Matrix algebra_matrix(const ProfiniteGroupAction& act, const Index& level, const Vector& xi);
/// exp(Σ ξ_i G_i).
Matrix group_matrix(const ProfiniteGroupAction& act, const Index& level, const Vector& xi);

/// Commutation of the action with projections and injections, and invariance
/// ‖φ_g^*ω − ω‖ for `elements` random group elements per level.
Report check_action(const ProfiniteGroupAction& act, const TameForm& omega,
                    std::span<const std::pair<Index, Index>> pairs, std::span<const Index> levels, int elements,
                    double tol, std::uint64_t seed = 0);

/// ξ ↦ μ(ξ), one cylindrical Hamiltonian per algebra element of a level.
struct MomentumMap {
  std::function<CylindricalFunction(const Index& level, const Vector& xi)> mu;
};

/// Residual between the FD infinitesimal generator d/dt exp(tξ)·x at t = 0 and
/// X_{μ(ξ)}(x) on random points. Throws NonSymplecticAction if exp(ξ) does not
/// preserve ω on the samples (beyond 1e-8).
Report momentum_verify(const TameForm& omega, const ProfiniteGroupAction& act, const MomentumMap& mu,
                       const Vector& xi, const Index& level, int samples, double tol, std::uint64_t seed = 0);

/// max |μ(aξ + bη)(x) − aμ(ξ)(x) − bμ(η)(x)| on random points.
double momentum_linearity_residual(const MomentumMap& mu, const Index& level, const Vector& xi, const Vector& eta,
                                   double a, double b, int samples, std::uint64_t seed = 0);

/// The endomorphism 𝔍 with ω(·, ·) = g(·, 𝔍 ·), i.e. G⁻¹ Ω.
Matrix musical_endomorphism(const Matrix& gram, const Matrix& omega);

}  // namespace profinite
