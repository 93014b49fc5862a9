#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "profinite/limits.hpp"

namespace profinite {

/// A distance d_J on every level. The topology of E_J is never inferred from it.
struct LevelMetricFamily {
  using LevelDistance = std::function<double(const Index&, const Vector&, const Vector&)>;

  std::string kind;  // "euclidean", "discrete" or "custom"
  FamilyPtr family;
  LevelDistance d;

  static LevelMetricFamily euclidean(FamilyPtr family);
  /// 0 on equal vectors (bitwise), 1 otherwise.
  static LevelMetricFamily discrete(FamilyPtr family);
  static LevelMetricFamily custom(FamilyPtr family, LevelDistance d);
};

/// Residual of d_J(x, y) − d_K(i x, i y) on random pairs, recorded as
/// "injection_isometry".
Report check_isometry(const LevelMetricFamily& m, std::span<const std::pair<Index, Index>> pairs, int samples,
                      double tol, std::uint64_t seed = 0);

/// Atomic measure on A: finitely many weights plus a bound on the mass left out.
struct IndexMeasure {
  std::vector<std::pair<Index, double>> weights;
  double tail_mass = 0.0;

  double listed_mass() const;
  double total_mass() const { return listed_mass() + tail_mass; }
};

/// Weights 1/(n+1)² on lo..hi, with the exact remaining mass Σ_{n>hi} as tail.
IndexMeasure inverse_square_measure(std::int64_t lo, std::int64_t hi);

struct DInfResult {
  double value = 0.0;
  bool converged = false;
  std::vector<double> partial;  // running sup after each level set
};

/// Running supremum of d_J/(1+d_J) over the nested level sets. Converged when
/// the last two enlargements moved it by at most `tol`, or when the last set
/// exhausts a finite index poset.
DInfResult d_inf(const LevelMetricFamily& m, const Thread& x, const Thread& y,
                 std::span<const std::vector<Index>> level_sets, double tol = 1e-12);

/// Level sets {lo}, {lo, lo+step}, ... up to `count` elements of a chain.
std::vector<std::vector<Index>> prefix_level_sets(std::int64_t lo, int count, std::int64_t step = 1);

struct DMuResult {
  double value = 0.0;
  double tail_bound = 0.0;  // the true integral lies in [value, value + tail_bound]
};

DMuResult d_mu(const LevelMetricFamily& m, const IndexMeasure& mu, const Thread& x, const Thread& y);

using ThreadDistance = std::function<double(const Thread&, const Thread&)>;

struct AuditOptions {
  /// Distinct threads (per thread_distance_on these levels) must be at positive distance.
  std::vector<Index> separation_levels;
  bool check_positivity = false;
  bool check_ultrametric = false;
};

/// "symmetry", "zero_diagonal", "triangle" and optionally "positivity" and
/// "ultrametric" over the sampled triples.
Report pseudo_metric_audit(const ThreadDistance& d, std::span<const std::array<Thread, 3>> triples, double tol,
                           const AuditOptions& options = {});

}  // namespace profinite
