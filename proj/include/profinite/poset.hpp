#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "profinite/index.hpp"

namespace profinite {

enum class PosetKind { Finite, CountableChain, FiniteSubsets };

std::string to_string(PosetKind kind);

/// A directed partially ordered index set, presented by oracles.
///
/// Infinite posets cannot be checked exhaustively; every predicate that
/// quantifies over the whole poset takes a caller-supplied probe set and its
/// answer means "verified on probe".
class IndexPoset {
 public:
  virtual ~IndexPoset() = default;

  virtual PosetKind kind() const = 0;
  virtual bool contains(const Index& j) const = 0;
  virtual bool leq(const Index& a, const Index& b) const = 0;
  /// Some upper bound of a and b, or nullopt when the oracle cannot find one.
  virtual std::optional<Index> join(const Index& a, const Index& b) const = 0;
  /// Full enumeration in canonical order, when the poset is finite.
  virtual std::optional<std::vector<Index>> elements() const = 0;
  virtual std::string label(const Index& j) const { return j.to_string(); }

  bool lt(const Index& a, const Index& b) const { return a != b && leq(a, b); }
  bool comparable(const Index& a, const Index& b) const { return leq(a, b) || leq(b, a); }
};

using PosetPtr = std::shared_ptr<const IndexPoset>;

/// Explicit finite poset on {0, ..., n-1} given by its relation matrix.
class FinitePoset final : public IndexPoset {
 public:
  /// Throws std::invalid_argument unless `leq` is a partial order.
  FinitePoset(std::vector<std::string> names, std::vector<std::vector<bool>> leq);

  PosetKind kind() const override { return PosetKind::Finite; }
  bool contains(const Index& j) const override;
  bool leq(const Index& a, const Index& b) const override;
  std::optional<Index> join(const Index& a, const Index& b) const override;
  std::optional<std::vector<Index>> elements() const override;
  std::string label(const Index& j) const override;

  std::size_t size() const { return names_.size(); }
  const std::vector<std::vector<bool>>& relation() const { return leq_; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Index> find(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
};

/// Integers lo, lo+step, lo+2*step, ... (up to hi when bounded) with the usual order.
class ChainPoset final : public IndexPoset {
 public:
  ChainPoset(std::int64_t lo, std::optional<std::int64_t> hi, std::int64_t step = 1);

  PosetKind kind() const override { return PosetKind::CountableChain; }
  bool contains(const Index& j) const override;
  bool leq(const Index& a, const Index& b) const override;
  std::optional<Index> join(const Index& a, const Index& b) const override;
  std::optional<std::vector<Index>> elements() const override;

  std::int64_t lo() const { return lo_; }
  std::optional<std::int64_t> hi() const { return hi_; }
  std::int64_t step() const { return step_; }

 private:
  std::int64_t lo_;
  std::optional<std::int64_t> hi_;
  std::int64_t step_;
};

/// Finite subsets of the interval (lo, hi], ordered by inclusion, join = union.
///
/// An optional finite pool restricts enumeration (not membership) to the
/// subsets of the pool; the empty set is the bottom element.
class FiniteSubsetPoset final : public IndexPoset {
 public:
  FiniteSubsetPoset(double lo, double hi, std::optional<ParamSet> pool = std::nullopt);

  PosetKind kind() const override { return PosetKind::FiniteSubsets; }
  bool contains(const Index& j) const override;
  bool leq(const Index& a, const Index& b) const override;
  std::optional<Index> join(const Index& a, const Index& b) const override;
  /// Subsets of the pool when the pool has at most 16 points.
  std::optional<std::vector<Index>> elements() const override;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::optional<ParamSet>& pool() const { return pool_; }

 private:
  double lo_;
  double hi_;
  std::optional<ParamSet> pool_;
};

/// A candidate section: a finite set of indices, or a marker for an infinite
/// antichain that can only be described, not listed.
class Section {
 public:
  Section() = default;
  explicit Section(std::vector<Index> members);
  Section(std::initializer_list<Index> members) : Section(std::vector<Index>(members)) {}

  static Section infinite(std::string description);

  const std::vector<Index>& members() const { return members_; }
  bool is_finite() const { return finite_; }
  bool empty() const { return finite_ && members_.empty(); }
  bool contains(const Index& j) const;
  std::string to_string() const;

  friend bool operator==(const Section&, const Section&) = default;

 private:
  std::vector<Index> members_;
  bool finite_ = true;
  std::string description_;
};

/// True iff every sampled pair has a validated upper bound; throws JoinFailure
/// when the join oracle gives up on a pair.
bool is_directed(const IndexPoset& poset, std::span<const Index> sample);

/// Antichain test plus comparability of every probe index to some member.
/// With no probe the poset must be finite and the whole poset is probed.
bool is_section(const IndexPoset& poset, const Section& s,
                std::optional<std::span<const Index>> probe = std::nullopt);

/// All sections of a finite poset, each in canonical member order, listed by
/// size and then lexicographically.
std::vector<Section> enumerate_sections(const IndexPoset& poset);

/// Strict upper shadow {J | some member K of the section has K < J}.
class FilterBaseSet {
 public:
  FilterBaseSet(PosetPtr poset, Section section);

  bool contains(const Index& j) const;
  const Section& section() const { return section_; }

 private:
  PosetPtr poset_;
  Section section_;
};

/// Requires `s` to pass is_section (on `probe` for infinite posets).
FilterBaseSet filter_base_set(PosetPtr poset, const Section& s,
                              std::optional<std::span<const Index>> probe = std::nullopt);

/// A finite section certifies that the filter of sections has a finite base.
bool is_finitely_cylindrical_witness(const IndexPoset& poset, const Section& s,
                                     std::optional<std::span<const Index>> probe = std::nullopt);

/// All pairs (a, b) from `indices` with a < b.
std::vector<std::pair<Index, Index>> comparable_pairs(const IndexPoset& poset, std::span<const Index> indices);

}  // namespace profinite
