#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "profinite/diffmap.hpp"
#include "profinite/poset.hpp"
#include "profinite/report.hpp"

namespace profinite {

/// Default tolerances: exact-arithmetic checks and finite-difference checks.
inline constexpr double kLinearTol = 1e-9;
inline constexpr double kFdTol = 1e-6;

/// A profinite family: finite-dimensional levels E_J ≅ R^dim(J) indexed by a
/// directed poset, with projections E_K → E_J and injections E_J → E_K for
/// every J ≤ K.
///
/// Both map accessors take the pair in (lower, upper) order: proj(J, K) maps
/// level K down to level J and inj(J, K) maps level J up to level K. Maps are
/// memoized behind a mutex, so a family can be shared across threads.
class ProfiniteFamily {
 public:
  using DimFn = std::function<int(const Index&)>;
  using MapFn = std::function<DifferentiableMap(const Index& lower, const Index& upper)>;

  ProfiniteFamily(std::string name, PosetPtr poset, DimFn dim, MapFn proj, MapFn inj);

  /// Finite poset with maps stored only for some comparable pairs (typically
  /// covering pairs). Other pairs are composed along a chain of stored pairs;
  /// path independence is what verify_family's consistency check measures.
  static std::shared_ptr<const ProfiniteFamily> from_stored_maps(
      std::string name, PosetPtr poset, std::map<Index, int> dims,
      std::map<std::pair<Index, Index>, DifferentiableMap> projections,
      std::map<std::pair<Index, Index>, DifferentiableMap> injections);

  const std::string& name() const { return name_; }
  const IndexPoset& poset() const { return *poset_; }
  const PosetPtr& poset_ptr() const { return poset_; }

  int dim(const Index& j) const;
  /// Level `upper` → level `lower`; throws NotComparable unless lower ≤ upper.
  DifferentiableMap proj(const Index& lower, const Index& upper) const;
  /// Level `lower` → level `upper`; throws NotComparable unless lower ≤ upper.
  DifferentiableMap inj(const Index& lower, const Index& upper) const;

 private:
  DifferentiableMap cached(std::map<std::pair<Index, Index>, DifferentiableMap>& cache, const MapFn& fn,
                           const Index& lower, const Index& upper) const;

  std::string name_;
  PosetPtr poset_;
  DimFn dim_;
  MapFn proj_;
  MapFn inj_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Index, Index>, DifferentiableMap> proj_cache_;
  mutable std::map<std::pair<Index, Index>, DifferentiableMap> inj_cache_;
};

using FamilyPtr = std::shared_ptr<const ProfiniteFamily>;

/// Uniform point in [-scale, scale]^dim.
Vector random_point(int dim, std::mt19937_64& rng, double scale = 1.0);

/// Up to `max_chains` chains of length ≤ 3 (ascending along leq) drawn from
/// `indices`: every comparable triple when there are few enough, otherwise a
/// seeded sample. Falls back to pairs when the indices contain no triple.
std::vector<std::vector<Index>> sample_chains(const IndexPoset& poset, std::span<const Index> indices,
                                              std::size_t max_chains, std::uint64_t seed);

/// Residuals of the four structural axioms (identity, retraction,
/// consistency, injection cocycle) over `chains`, each chain ascending.
/// Throws DimensionMismatch when a map's dimensions disagree with its levels.
Report verify_family(const ProfiniteFamily& family, std::span<const std::vector<Index>> chains,
                     int points_per_chain, double tol, std::uint64_t seed = 0);

/// Relative deviation between supplied and FD Jacobians of every map along the chains.
Report check_jacobians(const ProfiniteFamily& family, std::span<const std::vector<Index>> chains,
                       int points_per_chain, double tol, std::uint64_t seed = 0);

/// (x, v) ↦ (f(x), Df(x) v).
DifferentiableMap tangent_map(const DifferentiableMap& f);

/// The tangent family TE: levels R^{2 dim}, maps act by tangent_map.
FamilyPtr tangent_family(const FamilyPtr& family);

/// Product family E_J = M_J × F_J with direct-sum maps; both families must
/// share one poset object.
FamilyPtr product_family(const FamilyPtr& m, const FamilyPtr& f);

/// Constant family: every level is R^dim and every map the identity.
FamilyPtr constant_family(PosetPtr poset, int dim, std::string name = "constant");

/// Covector transport between level J and level K ≥ J at a point of level K.
struct CotangentMaps {
  Matrix push_up;    // α ↦ α ∘ Dπ_J^K, a dim(K) × dim(J) matrix acting on covector columns
  Matrix push_down;  // β ↦ β ∘ Di_J^K, a dim(J) × dim(K) matrix
};

CotangentMaps cotangent_maps(const ProfiniteFamily& family, const Index& lower, const Index& upper,
                             const Vector& point_at_upper);

/// Morphism of profinite families: an order-preserving index map plus level
/// maps E_J → E'_{index_map(J)} making every projection square commute.
class ProfiniteMap {
 public:
  using IndexMapFn = std::function<Index(const Index&)>;
  using LevelMapFn = std::function<DifferentiableMap(const Index&)>;

  ProfiniteMap(FamilyPtr source, FamilyPtr target, IndexMapFn index_map, LevelMapFn level_map);

  static ProfiniteMap identity(const FamilyPtr& family);

  const FamilyPtr& source() const { return source_; }
  const FamilyPtr& target() const { return target_; }
  Index index_map(const Index& j) const { return index_map_(j); }
  /// Level map at J; throws DimensionMismatch if it disagrees with the levels.
  DifferentiableMap level(const Index& j) const;

 private:
  FamilyPtr source_;
  FamilyPtr target_;
  IndexMapFn index_map_;
  LevelMapFn level_map_;
};

/// Residual of target.proj(ind J, ind K) ∘ f_K − f_J ∘ source.proj(J, K) on
/// sampled points of level K, for each pair (J, K) with J ≤ K.
Report check_commuting_squares(const ProfiniteMap& f, std::span<const std::pair<Index, Index>> pairs,
                               int points_per_pair, double tol, std::uint64_t seed = 0);

/// f ∘ g; throws FamilyMismatch unless g's target is f's source.
ProfiniteMap compose_profinite_maps(const ProfiniteMap& f, const ProfiniteMap& g);

/// True iff g ∘ f and f ∘ g are the identity (index maps and level maps) on
/// every sampled index within `tol`.
bool is_profinite_diffeomorphism(const ProfiniteMap& f, const ProfiniteMap& g, std::span<const Index> indices,
                                 int points_per_level, double tol, std::uint64_t seed = 0);

/// Fiber bundle data E → M with typical fiber F, level by level.
struct FibrationData {
  FamilyPtr total;
  FamilyPtr base;
  FamilyPtr fiber;
  std::function<DifferentiableMap(const Index&)> bundle_proj;
};

/// Commutation residuals of the bundle projections with both map families.
Report verify_fibration(const FibrationData& data, std::span<const std::pair<Index, Index>> pairs,
                        int points_per_pair, double tol, std::uint64_t seed = 0);

}  // namespace profinite
