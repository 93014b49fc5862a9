#include "profinite/limits.hpp"

#include <sstream>

#include "profinite/errors.hpp"

namespace profinite {

Thread::Thread(FamilyPtr family, ValueFn value)
    : family_(std::move(family)), value_(std::move(value)), memo_(std::make_shared<Memo>()) {}

Vector Thread::operator()(const Index& j) const {
  {
    std::lock_guard lock(memo_->mutex);
    if (auto it = memo_->values.find(j); it != memo_->values.end()) return it->second;
  }
  Vector v = value_(j);
  if (v.size() != family_->dim(j))
    throw DimensionMismatch("thread value at " + family_->poset().label(j) + " has size " +
                            std::to_string(v.size()) + ", level has " + std::to_string(family_->dim(j)));
  std::lock_guard lock(memo_->mutex);
  return memo_->values.emplace(j, std::move(v)).first->second;
}

namespace {

bool agrees(const Vector& a, const Vector& b, double tol) {
  const double scale = 1.0 + std::max(a.size() ? a.cwiseAbs().maxCoeff() : 0.0,
                                      b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  return max_abs_diff(a, b) <= tol * scale;
}

}  // namespace

Thread thread_from_section(const FamilyPtr& family, const SectionPoint& point,
                           std::optional<std::span<const Index>> coherence_probe, double tol) {
  const auto& poset = family->poset();
  const auto& members = point.section.members();
  if (members.empty()) throw EmptySection("section point without members");
  for (const auto& m : members) {
    auto it = point.values.find(m);
    if (it == point.values.end()) throw IllDefinedSection("no value at member " + poset.label(m));
    if (it->second.size() != family->dim(m))
      throw DimensionMismatch("value at member " + poset.label(m) + " has the wrong size");
  }

  auto data = std::make_shared<const SectionPoint>(point);
  auto value_at = [family, data, tol](const Index& i) -> Vector {
    const auto& poset = family->poset();
    std::optional<Vector> out;
    std::string source;
    for (const auto& s : data->section.members()) {
      std::optional<Vector> candidate;
      if (poset.leq(i, s))
        candidate = family->proj(i, s)(data->values.at(s));
      else if (poset.leq(s, i))
        candidate = family->inj(s, i)(data->values.at(s));
      if (!candidate) continue;
      if (out && !agrees(*out, *candidate, tol))
        throw IllDefinedSection("members " + source + " and " + poset.label(s) + " disagree at " +
                                poset.label(i));
      if (!out) {
        out = std::move(candidate);
        source = poset.label(s);
      }
    }
    if (!out) throw Incomparable(poset.label(i) + " is comparable to no member of " + data->section.to_string());
    return *out;
  };

  std::optional<std::vector<Index>> all;
  std::span<const Index> probe;
  if (coherence_probe) {
    probe = *coherence_probe;
  } else if ((all = poset.elements())) {
    probe = *all;
  }
  // Conflicts can only arise at indices comparable to two or more members.
  for (const auto& i : probe) {
    int hits = 0;
    for (const auto& s : members) hits += poset.comparable(i, s) ? 1 : 0;
    if (hits >= 2) value_at(i);
  }
  return Thread(family, value_at);
}

SectionPoint restrict_to(const Thread& t, const Section& section) {
  SectionPoint out{section, {}};
  for (const auto& m : section.members()) out.values.emplace(m, t(m));
  return out;
}

Report check_thread(const Thread& t, std::span<const std::pair<Index, Index>> pairs, double tol) {
  Report report;
  for (const auto& [j, k] : pairs)
    report.record("thread_consistency", max_abs_diff(t(j), t.family()->proj(j, k)(t(k))), tol);
  return report;
}

double thread_distance_on(const Thread& x, const Thread& y, std::span<const Index> indices) {
  double d = 0.0;
  for (const auto& j : indices) d = std::max(d, max_abs_diff(x(j), y(j)));
  return d;
}

std::optional<SectionPoint> is_inductive(const Thread& t, std::span<const Section> candidates,
                                         std::span<const Index> sample, double tol) {
  for (const auto& s : candidates) {
    SectionPoint sp = restrict_to(t, s);
    try {
      Thread induced = thread_from_section(t.family(), sp, sample, tol);
      if (thread_distance_on(induced, t, sample) <= tol) return sp;
    } catch (const IllDefinedSection&) {
    } catch (const Incomparable&) {
    }
  }
  return std::nullopt;
}

namespace {

void require_same_family(const Thread& a, const Thread& b) {
  if (a.family() != b.family())
    throw FamilyMismatch(a.family()->name() + " vs " + b.family()->name());
}

void require_consistent(const Thread& result, std::span<const std::pair<Index, Index>> pairs, double tol,
                        const std::string& what) {
  for (const auto& [j, k] : pairs) {
    const double r = max_abs_diff(result(j), result.family()->proj(j, k)(result(k)));
    if (!(r <= tol)) {
      std::ostringstream os;
      os << what << ": projection (" << result.family()->poset().label(j) << ","
         << result.family()->poset().label(k) << ") is not a morphism, residual " << r;
      throw MorphismViolation(os.str());
    }
  }
}

}  // namespace

Thread lift_binary(const AlgebraicStructure& op, const Thread& x, const Thread& y,
                   std::span<const std::pair<Index, Index>> pairs, double tol) {
  require_same_family(x, y);
  Thread out(x.family(), [op, x, y](const Index& j) { return op.law(j, x(j), y(j)); });
  require_consistent(out, pairs, tol, op.name);
  return out;
}

Thread lift_inverse(const AlgebraicStructure& op, const Thread& x,
                    std::span<const std::pair<Index, Index>> pairs, double tol) {
  if (!op.inverse) throw NotInvertible(op.name + " has no inverses");
  Thread out(x.family(), [op, x](const Index& j) {
    auto inv = op.inverse(j, x(j));
    if (!inv) throw NotInvertible("at level " + x.family()->poset().label(j));
    return *inv;
  });
  require_consistent(out, pairs, tol, op.name + " inverse");
  return out;
}

Thread lift_scalar_action(const ScalarAction& action, const Thread& r, const Thread& x,
                          std::span<const std::pair<Index, Index>> pairs, double tol) {
  if (r.family()->poset_ptr() != x.family()->poset_ptr())
    throw FamilyMismatch("ring and module families are indexed by different posets");
  Thread out(x.family(), [action, r, x](const Index& j) { return action.act(j, r(j), x(j)); });
  require_consistent(out, pairs, tol, action.name);
  return out;
}

Thread neutral_thread(const AlgebraicStructure& op, const FamilyPtr& family) {
  return Thread(family, [op](const Index& j) { return op.neutral(j); });
}

}  // namespace profinite
