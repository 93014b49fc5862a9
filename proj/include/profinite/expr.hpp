#pragma once

#include <memory>
#include <string>
#include <vector>

#include "profinite/cylinder.hpp"

namespace profinite {

/// Expression mini-language for cylindrical functions.
///
///   expr    := term (('+' | '-') term)*
///   term    := power (('*' | '/') power)*
///   power   := unary ('^' power)?          exponent must be free of coordinates
///   unary   := '-' unary | primary
///   primary := number | coordinate | name '(' expr ')' | '(' expr ')'
///   coordinate := 'level:' index ':' integer
///   index   := integer | '{' t1, t2, ... '}' | element name of a finite poset
///   name    := sin | cos | exp | log | sqrt | sqr | tanh
///
/// Example: "sqr(level:{0.5}:0) - 1" or "level:3:0 * level:3:1".
struct CoordinateRef {
  Index level;
  int coord;
};

class Expression {
 public:
  struct Node;

  /// Throws ParseError with the offending position. Index tokens are resolved
  /// against `poset` (names for finite posets).
  static Expression parse(const std::string& text, const IndexPoset& poset);

  const std::vector<CoordinateRef>& references() const { return refs_; }
  /// Value and gradient with respect to references() at the given reference values.
  std::pair<double, Vector> evaluate(const Vector& ref_values) const;

  /// Compiles to a cylindrical function whose section is the set of maximal
  /// referenced levels; lower references are reached through projections.
  CylindricalFunction compile(const FamilyPtr& family) const;

  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
  std::vector<CoordinateRef> refs_;
};

}  // namespace profinite
