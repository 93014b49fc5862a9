#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace profinite {

/// Sorted, duplicate-free set of parameters (e.g. evaluation times).
using ParamSet = std::vector<double>;

/// Opaque identifier of an element of an index poset.
///
/// Two representations cover every poset kind in the library: an integer
/// (finite posets by position, chains by value) and a finite parameter set
/// (posets of finite subsets). The defaulted ordering is a canonical total
/// order used for deterministic enumeration; it is unrelated to the poset's
/// own partial order.
class Index {
 public:
  Index() = default;
  Index(std::int64_t n) : value_(n) {}  // NOLINT: integers are indices
  Index(int n) : value_(static_cast<std::int64_t>(n)) {}  // NOLINT

  /// Builds a parameter-set index; input is sorted and deduplicated.
  static Index params(ParamSet ts);
  static Index params(std::initializer_list<double> ts) { return params(ParamSet(ts)); }

  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_params() const { return std::holds_alternative<ParamSet>(value_); }

  std::int64_t integer() const;
  const ParamSet& param_set() const;

  std::string to_string() const;

  friend auto operator<=>(const Index&, const Index&) = default;
  friend bool operator==(const Index&, const Index&) = default;

 private:
  std::variant<std::int64_t, ParamSet> value_{std::int64_t{0}};
};

/// Parses the textual form produced by Index::to_string ("7" or "{0.25,0.5}").
Index parse_index(const std::string& text);

}  // namespace profinite
