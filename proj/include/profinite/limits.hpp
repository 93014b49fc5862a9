#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "profinite/family.hpp"

namespace profinite {

/// An element of the product limit E^A: a lazily evaluated assignment
/// J ↦ x_J ∈ E_J. Values are memoized per index behind a shared, synchronized
/// cache, so copies of a Thread share evaluations.
///
/// Equality of threads is only decidable on finite index samples; see
/// thread_distance_on.
class Thread {
 public:
  using ValueFn = std::function<Vector(const Index&)>;

  Thread(FamilyPtr family, ValueFn value);

  const FamilyPtr& family() const { return family_; }
  /// x_J; throws DimensionMismatch if the oracle returns a vector of the wrong size.
  Vector operator()(const Index& j) const;

 private:
  struct Memo {
    std::mutex mutex;
    std::map<Index, Vector> values;
  };
  FamilyPtr family_;
  ValueFn value_;
  std::shared_ptr<Memo> memo_;
};

/// Representative of an element of the inductive limit E_A: values on the
/// members of a section.
struct SectionPoint {
  Section section;
  std::map<Index, Vector> values;
};

/// Extends section data to a thread: project down below a member, inject up
/// above one. Coherence between members is checked on every common lower or
/// upper bound found in `coherence_probe` (all of A for finite posets when no
/// probe is given) and again whenever an index is evaluated.
/// Throws IllDefinedSection on conflict; evaluating an index comparable to no
/// member throws Incomparable.
Thread thread_from_section(const FamilyPtr& family, const SectionPoint& point,
                           std::optional<std::span<const Index>> coherence_probe = std::nullopt,
                           double tol = kLinearTol);

/// Values of `t` on the members of `section`.
SectionPoint restrict_to(const Thread& t, const Section& section);

/// Max residual of x_J − π_J^K(x_K) over the pairs (J, K).
Report check_thread(const Thread& t, std::span<const std::pair<Index, Index>> pairs, double tol);

/// Max-norm distance between two threads on the sampled indices.
double thread_distance_on(const Thread& x, const Thread& y, std::span<const Index> indices);

/// First candidate section whose induced thread matches `t` on `sample`
/// within `tol`. An empty result is not a proof that `t` lies outside E_A.
std::optional<SectionPoint> is_inductive(const Thread& t, std::span<const Section> candidates,
                                         std::span<const Index> sample, double tol);

/// Level-wise algebraic operations on a profinite family.
struct AlgebraicStructure {
  std::string name;
  std::function<Vector(const Index&, const Vector&, const Vector&)> law;
  /// Empty function: no inverses. Returning nullopt: not invertible at this point.
  std::function<std::optional<Vector>(const Index&, const Vector&)> inverse;
  std::function<Vector(const Index&)> neutral;
};

/// Level-wise action of a ring family on a module family.
struct ScalarAction {
  std::string name;
  std::function<Vector(const Index&, const Vector& scalar, const Vector& x)> act;
};

/// (x ⊢ y)_J = x_J ⊢_J y_J. The morphism property of the projections is
/// checked on `pairs` with the operands' own values; a failure throws
/// MorphismViolation naming the pair and residual.
Thread lift_binary(const AlgebraicStructure& op, const Thread& x, const Thread& y,
                   std::span<const std::pair<Index, Index>> pairs, double tol = kLinearTol);

/// (x^{-1})_J = (x_J)^{-1}; evaluated eagerly on the indices in `pairs`, where
/// a singular level throws NotInvertible.
Thread lift_inverse(const AlgebraicStructure& op, const Thread& x,
                    std::span<const std::pair<Index, Index>> pairs, double tol = kLinearTol);

/// (r · x)_J = r_J ·_J x_J with the same morphism check as lift_binary.
Thread lift_scalar_action(const ScalarAction& action, const Thread& r, const Thread& x,
                          std::span<const std::pair<Index, Index>> pairs, double tol = kLinearTol);

/// Neutral thread J ↦ op.neutral(J).
Thread neutral_thread(const AlgebraicStructure& op, const FamilyPtr& family);

}  // namespace profinite
