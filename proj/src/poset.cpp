#include "profinite/poset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "profinite/errors.hpp"

namespace profinite {

std::string to_string(PosetKind kind) {
  switch (kind) {
    case PosetKind::Finite: return "finite";
    case PosetKind::CountableChain: return "countable-chain";
    case PosetKind::FiniteSubsets: return "finite-subsets-of-parameter-set";
  }
  return "unknown";
}

// ---------------------------------------------------------------- FinitePoset

FinitePoset::FinitePoset(std::vector<std::string> names, std::vector<std::vector<bool>> leq)
    : names_(std::move(names)), leq_(std::move(leq)) {
  const std::size_t n = names_.size();
  if (leq_.size() != n) throw std::invalid_argument("relation matrix has wrong row count");
  for (const auto& row : leq_)
    if (row.size() != n) throw std::invalid_argument("relation matrix is not square");
  for (std::size_t a = 0; a < n; ++a) {
    if (!leq_[a][a]) throw std::invalid_argument("relation is not reflexive at " + names_[a]);
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && leq_[a][b] && leq_[b][a])
        throw std::invalid_argument("relation is not antisymmetric: " + names_[a] + ", " + names_[b]);
      for (std::size_t c = 0; c < n; ++c)
        if (leq_[a][b] && leq_[b][c] && !leq_[a][c])
          throw std::invalid_argument("relation is not transitive: " + names_[a] + " <= " + names_[b] +
                                      " <= " + names_[c]);
    }
  }
}

bool FinitePoset::contains(const Index& j) const {
  return j.is_integer() && j.integer() >= 0 && static_cast<std::size_t>(j.integer()) < names_.size();
}

bool FinitePoset::leq(const Index& a, const Index& b) const {
  if (!contains(a) || !contains(b)) throw std::out_of_range("index outside finite poset");
  return leq_[a.integer()][b.integer()];
}

std::optional<Index> FinitePoset::join(const Index& a, const Index& b) const {
  std::vector<std::size_t> upper;
  for (std::size_t r = 0; r < names_.size(); ++r)
    if (leq(a, Index(static_cast<std::int64_t>(r))) && leq(b, Index(static_cast<std::int64_t>(r))))
      upper.push_back(r);
  // First minimal upper bound in canonical order.
  for (std::size_t r : upper) {
    bool minimal = true;
    for (std::size_t s : upper)
      if (s != r && leq_[s][r]) minimal = false;
    if (minimal) return Index(static_cast<std::int64_t>(r));
  }
  return std::nullopt;
}

std::optional<std::vector<Index>> FinitePoset::elements() const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < names_.size(); ++i) out.emplace_back(static_cast<std::int64_t>(i));
  return out;
}

std::string FinitePoset::label(const Index& j) const {
  return contains(j) ? names_[j.integer()] : j.to_string();
}

std::optional<Index> FinitePoset::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return Index(static_cast<std::int64_t>(it - names_.begin()));
}

// ----------------------------------------------------------------- ChainPoset

ChainPoset::ChainPoset(std::int64_t lo, std::optional<std::int64_t> hi, std::int64_t step)
    : lo_(lo), hi_(hi), step_(step) {
  if (step_ <= 0) throw std::invalid_argument("chain step must be positive");
  if (hi_ && *hi_ < lo_) throw std::invalid_argument("empty chain");
}

bool ChainPoset::contains(const Index& j) const {
  if (!j.is_integer()) return false;
  const auto n = j.integer();
  return n >= lo_ && (!hi_ || n <= *hi_) && (n - lo_) % step_ == 0;
}

bool ChainPoset::leq(const Index& a, const Index& b) const { return a.integer() <= b.integer(); }

std::optional<Index> ChainPoset::join(const Index& a, const Index& b) const {
  return Index(std::max(a.integer(), b.integer()));
}

std::optional<std::vector<Index>> ChainPoset::elements() const {
  if (!hi_) return std::nullopt;
  std::vector<Index> out;
  for (std::int64_t n = lo_; n <= *hi_; n += step_) out.emplace_back(n);
  return out;
}

// ---------------------------------------------------------- FiniteSubsetPoset

FiniteSubsetPoset::FiniteSubsetPoset(double lo, double hi, std::optional<ParamSet> pool)
    : lo_(lo), hi_(hi) {
  if (pool) {
    pool_ = Index::params(*pool).param_set();
    for (double t : *pool_)
      if (!(t > lo_ && t <= hi_)) throw std::invalid_argument("pool parameter outside (lo, hi]");
  }
}

bool FiniteSubsetPoset::contains(const Index& j) const {
  if (!j.is_params()) return false;
  return std::all_of(j.param_set().begin(), j.param_set().end(),
                     [&](double t) { return t > lo_ && t <= hi_; });
}

bool FiniteSubsetPoset::leq(const Index& a, const Index& b) const {
  const auto& x = a.param_set();
  const auto& y = b.param_set();
  return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

std::optional<Index> FiniteSubsetPoset::join(const Index& a, const Index& b) const {
  ParamSet u;
  std::set_union(a.param_set().begin(), a.param_set().end(), b.param_set().begin(),
                 b.param_set().end(), std::back_inserter(u));
  return Index::params(std::move(u));
}

std::optional<std::vector<Index>> FiniteSubsetPoset::elements() const {
  if (!pool_ || pool_->size() > 16) return std::nullopt;
  const std::size_t n = pool_->size();
  std::vector<Index> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    ParamSet ts;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) ts.push_back((*pool_)[i]);
    out.push_back(Index::params(std::move(ts)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// -------------------------------------------------------------------- Section

Section::Section(std::vector<Index> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Section Section::infinite(std::string description) {
  Section s;
  s.finite_ = false;
  s.description_ = std::move(description);
  return s;
}

bool Section::contains(const Index& j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

std::string Section::to_string() const {
  if (!finite_) return "<infinite antichain: " + description_ + ">";
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i].to_string();
  os << ']';
  return os.str();
}

// ----------------------------------------------------------------- operations

bool is_directed(const IndexPoset& poset, std::span<const Index> sample) {
  if (sample.empty()) throw std::invalid_argument("is_directed: empty sample");
  for (const auto& j : sample)
    for (const auto& k : sample) {
      auto r = poset.join(j, k);
      if (!r) throw JoinFailure("no upper bound for " + poset.label(j) + " and " + poset.label(k));
      if (!poset.contains(*r) || !poset.leq(j, *r) || !poset.leq(k, *r)) return false;
    }
  return true;
}

namespace {

bool is_antichain(const IndexPoset& poset, const std::vector<Index>& members) {
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if (poset.comparable(members[a], members[b])) return false;
  return true;
}

bool covers_probe(const IndexPoset& poset, const std::vector<Index>& members,
                  std::span<const Index> probe) {
  return std::all_of(probe.begin(), probe.end(), [&](const Index& i) {
    return std::any_of(members.begin(), members.end(),
                       [&](const Index& s) { return poset.comparable(i, s); });
  });
}

}  // namespace

bool is_section(const IndexPoset& poset, const Section& s, std::optional<std::span<const Index>> probe) {
  if (s.empty()) throw EmptySection("a section needs at least one member");
  if (!s.is_finite()) throw InfinitePoset("cannot test an unlisted infinite antichain");
  for (const auto& m : s.members())
    if (!poset.contains(m)) return false;
  if (!is_antichain(poset, s.members())) return false;
  if (probe) return covers_probe(poset, s.members(), *probe);
  auto all = poset.elements();
  if (!all) throw InfinitePoset("is_section on an infinite poset needs an explicit probe");
  return covers_probe(poset, s.members(), *all);
}

std::vector<Section> enumerate_sections(const IndexPoset& poset) {
  auto all = poset.elements();
  if (!all) throw InfinitePoset("enumerate_sections needs a finite poset");
  const auto& el = *all;
  std::vector<std::vector<Index>> antichains;
  std::vector<Index> current;
  // Depth-first over antichains in canonical order; every extension keeps the
  // antichain property so the search never visits comparable pairs.
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    for (std::size_t i = from; i < el.size(); ++i) {
      bool ok = std::none_of(current.begin(), current.end(),
                             [&](const Index& m) { return poset.comparable(m, el[i]); });
      if (!ok) continue;
      current.push_back(el[i]);
      antichains.push_back(current);
      grow(i + 1);
      current.pop_back();
    }
  };
  grow(0);
  std::vector<Section> out;
  for (auto& a : antichains)
    if (covers_probe(poset, a, el)) out.emplace_back(std::move(a));
  std::stable_sort(out.begin(), out.end(), [](const Section& x, const Section& y) {
    if (x.members().size() != y.members().size()) return x.members().size() < y.members().size();
    return x.members() < y.members();
  });
  return out;
}

FilterBaseSet::FilterBaseSet(PosetPtr poset, Section section)
    : poset_(std::move(poset)), section_(std::move(section)) {}

bool FilterBaseSet::contains(const Index& j) const {
  return std::any_of(section_.members().begin(), section_.members().end(),
                     [&](const Index& k) { return poset_->lt(k, j); });
}

FilterBaseSet filter_base_set(PosetPtr poset, const Section& s, std::optional<std::span<const Index>> probe) {
  if (!is_section(*poset, s, probe))
    throw std::invalid_argument("filter_base_set: " + s.to_string() + " is not a section");
  return FilterBaseSet(std::move(poset), s);
}

bool is_finitely_cylindrical_witness(const IndexPoset& poset, const Section& s,
                                     std::optional<std::span<const Index>> probe) {
  if (!s.is_finite() || s.empty()) return false;
  return is_section(poset, s, probe);
}

std::vector<std::pair<Index, Index>> comparable_pairs(const IndexPoset& poset, std::span<const Index> indices) {
  std::vector<std::pair<Index, Index>> out;
  for (const auto& a : indices)
    for (const auto& b : indices)
      if (poset.lt(a, b)) out.emplace_back(a, b);
  return out;
}

}  // namespace profinite
