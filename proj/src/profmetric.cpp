#include "profinite/profmetric.hpp"

#include <cmath>
#include <numbers>

#include "profinite/errors.hpp"

namespace profinite {

LevelMetricFamily LevelMetricFamily::euclidean(FamilyPtr family) {
  return {"euclidean", std::move(family), [](const Index&, const Vector& x, const Vector& y) { return (x - y).norm(); }};
}

LevelMetricFamily LevelMetricFamily::discrete(FamilyPtr family) {
  return {"discrete", std::move(family),
          [](const Index&, const Vector& x, const Vector& y) { return x.size() == y.size() && x == y ? 0.0 : 1.0; }};
}

LevelMetricFamily LevelMetricFamily::custom(FamilyPtr family, LevelDistance d) {
  return {"custom", std::move(family), std::move(d)};
}

Report check_isometry(const LevelMetricFamily& m, std::span<const std::pair<Index, Index>> pairs, int samples,
                      double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  for (const auto& [j, k] : pairs) {
    auto inj = m.family->inj(j, k);
    const int n = m.family->dim(j);
    for (int s = 0; s < samples; ++s) {
      Vector x = random_point(n, rng);
      Vector y = random_point(n, rng);
      report.record("injection_isometry", std::abs(m.d(j, x, y) - m.d(k, inj(x), inj(y))), tol);
    }
  }
  return report;
}

double IndexMeasure::listed_mass() const {
  double total = 0.0;
  for (const auto& [j, w] : weights) total += w;
  return total;
}

IndexMeasure inverse_square_measure(std::int64_t lo, std::int64_t hi) {
  IndexMeasure mu;
  for (std::int64_t n = lo; n <= hi; ++n) mu.weights.emplace_back(Index(n), 1.0 / double((n + 1) * (n + 1)));
  // Σ_{m≥1} 1/m² − Σ_{m≤hi+1} 1/m², summed from the small end for accuracy.
  double head = 0.0;
  for (std::int64_t m = hi + 1; m >= 1; --m) head += 1.0 / double(m * m);
  mu.tail_mass = std::max(0.0, std::numbers::pi * std::numbers::pi / 6.0 - head);
  return mu;
}

namespace {

double bounded(double d) { return std::isinf(d) ? 1.0 : d / (1.0 + d); }

}  // namespace

DInfResult d_inf(const LevelMetricFamily& m, const Thread& x, const Thread& y,
                 std::span<const std::vector<Index>> level_sets, double tol) {
  if (x.family() != y.family()) throw FamilyMismatch("d_inf needs threads of one family");
  DInfResult out;
  std::map<Index, double> seen;
  double sup = 0.0;
  for (const auto& set : level_sets) {
    for (const auto& j : set) {
      if (seen.contains(j)) continue;
      const double v = bounded(m.d(j, x(j), y(j)));
      seen.emplace(j, v);
      sup = std::max(sup, v);
    }
    out.partial.push_back(sup);
  }
  out.value = sup;
  const auto n = out.partial.size();
  if (n >= 3) out.converged = out.partial[n - 1] - out.partial[n - 3] <= tol;
  if (auto all = x.family()->poset().elements(); all && !level_sets.empty()) {
    bool exhausted = true;
    for (const auto& j : *all) exhausted = exhausted && seen.contains(j);
    out.converged = out.converged || exhausted;
  }
  return out;
}

std::vector<std::vector<Index>> prefix_level_sets(std::int64_t lo, int count, std::int64_t step) {
  std::vector<std::vector<Index>> sets;
  std::vector<Index> current;
  for (int k = 0; k < count; ++k) {
    current.emplace_back(lo + k * step);
    sets.push_back(current);
  }
  return sets;
}

DMuResult d_mu(const LevelMetricFamily& m, const IndexMeasure& mu, const Thread& x, const Thread& y) {
  if (x.family() != y.family()) throw FamilyMismatch("d_mu needs threads of one family");
  DMuResult out;
  for (const auto& [j, w] : mu.weights)
    if (w != 0.0) out.value += w * bounded(m.d(j, x(j), y(j)));
  out.tail_bound = mu.tail_mass;
  return out;
}

Report pseudo_metric_audit(const ThreadDistance& d, std::span<const std::array<Thread, 3>> triples, double tol,
                           const AuditOptions& options) {
  Report report;
  for (const auto& [x, y, z] : triples) {
    const double xy = d(x, y), yx = d(y, x), yz = d(y, z), xz = d(x, z);
    report.record("symmetry", std::abs(xy - yx), tol);
    report.record("zero_diagonal", std::abs(d(x, x)), tol);
    report.record("triangle", std::max(0.0, xz - (xy + yz)), tol);
    if (options.check_ultrametric) report.record("ultrametric", std::max(0.0, xz - std::max(xy, yz)), tol);
    if (options.check_positivity) {
      const bool distinct = thread_distance_on(x, y, options.separation_levels) > 0.0;
      report.record_verdict("positivity", !distinct || xy > 0.0);
    }
  }
  return report;
}

}  // namespace profinite
