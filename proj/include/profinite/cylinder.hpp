#pragma once

#include <optional>
#include <span>
#include <vector>

#include "profinite/limits.hpp"

namespace profinite {

/// A function on the limit that factors through the finitely many levels of
/// a section: f(t) = base(t(S_1), ..., t(S_k)), members in canonical order.
///
/// The section is stored explicitly; it is not unique, and refine() re-expresses
/// the same function over a section further up the poset.
class CylindricalFunction {
 public:
  /// Throws DimensionMismatch unless `base` maps the concatenated section
  /// coordinates to R.
  CylindricalFunction(FamilyPtr family, Section section, DifferentiableMap base);

  static CylindricalFunction constant(FamilyPtr family, Section section, double c);
  /// x ↦ x_level[coord].
  static CylindricalFunction coordinate(FamilyPtr family, const Index& level, int coord);

  const FamilyPtr& family() const { return family_; }
  const Section& section() const { return section_; }
  const DifferentiableMap& base() const { return base_; }
  int section_dim() const { return base_.domain_dim(); }

  /// Concatenated member coordinates of a thread or section point.
  Vector gather(const Thread& t) const;
  Vector gather(const SectionPoint& p) const;

  /// The same function over `finer`, whose members each dominate some member
  /// of the current section.
  CylindricalFunction refine(const Section& finer) const;

  /// f read on level J: each member is reached by projecting down from J or
  /// injecting up from J. Throws Incomparable when a member is neither.
  DifferentiableMap on_level(const Index& j) const;

 private:
  FamilyPtr family_;
  Section section_;
  DifferentiableMap base_;
};

/// Throws FamilyMismatch if the thread lives on another family.
double eval(const CylindricalFunction& f, const Thread& t);

/// Restriction of t to f's section; extending it back reproduces eval exactly.
SectionPoint representative(const CylindricalFunction& f, const Thread& t);

/// A coordinate function at the first witness level where x and y differ
/// (largest coordinate gap at that level), or nullopt if they agree on every
/// witness level.
std::optional<CylindricalFunction> separate(const Thread& x, const Thread& y, std::span<const Index> witness_levels);

/// Gradient of the base map at t's representative, laid out like gather().
Vector differential(const CylindricalFunction& f, const Thread& t);

/// Polynomial expressions in cylindrical functions.
class CylPolynomial {
 public:
  struct Term {
    double coeff;
    std::vector<CylindricalFunction> factors;
  };

  CylPolynomial() = default;
  static CylPolynomial constant(double c);
  static CylPolynomial of(const CylindricalFunction& f);
  /// P(f) for P with coefficients c_0 + c_1 X + c_2 X^2 + ...
  static CylPolynomial univariate(std::span<const double> coeffs, const CylindricalFunction& f);

  const std::vector<Term>& terms() const { return terms_; }

  double evaluate(const Thread& t) const;

  /// A single cylindrical function over the join of every factor's members.
  /// Throws JoinFailure when the poset cannot co-refine the sections.
  CylindricalFunction to_cylindrical(const FamilyPtr& family) const;

  CylPolynomial& operator+=(const CylPolynomial& o);
  friend CylPolynomial operator+(CylPolynomial a, const CylPolynomial& b) { return a += b; }
  friend CylPolynomial operator*(const CylPolynomial& a, const CylPolynomial& b);
  friend CylPolynomial operator*(double s, CylPolynomial a);

 private:
  std::vector<Term> terms_;
};

}  // namespace profinite
