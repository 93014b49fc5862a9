#pragma once

#include <map>
#include <string>
#include <vector>

#include "profinite/calculus.hpp"
#include "profinite/cylinder.hpp"
#include "profinite/limits.hpp"
#include "profinite/symplectic.hpp"

namespace profinite {

/// A built-in family together with its distinguished threads, forms and metrics.
struct GalleryFamily {
  std::string name;
  std::string description;
  std::map<std::string, double> params;
  FamilyPtr family;
  std::vector<Index> sample_levels;  // indices used by default audits
  std::map<std::string, Thread> threads;
  std::map<std::string, TameForm> forms;
  std::map<std::string, CompatibleMetric> metrics;
};

/// First m coordinates of R^n, as an m × n matrix.
Matrix truncation_matrix(int m, int n);

/// R^n, n = 1..max_level, with truncations and zero padding. Carries the
/// radial 1-form Σ x_k dx_k, the dot product and the Lorentz form diag(1,−1,…).
GalleryFamily euclid_tower(int max_level);

/// Polynomials of degree ≤ n (coefficients a_0..a_n), n = 0..max_degree.
/// Thread "exp_series" holds the Taylor coefficients 1/k!.
GalleryFamily poly_tower(int max_degree);

/// k-jets of functions R → R at 0 are Taylor coefficient vectors, so the jet
/// tower is the polynomial tower.
inline GalleryFamily jet_tower(int max_order) {
  auto g = poly_tower(max_order);
  g.name = "jet_tower";
  return g;
}

/// Product truncated at the level's degree: a morphism of the polynomial tower.
AlgebraicStructure truncated_product();
/// Product modulo X^{n+1} − 1 at level n: not compatible with truncation.
AlgebraicStructure cyclic_product();

/// M_n(R) (row-major, dim n²), n = 1..max_n, with top-left block truncation
/// and corner embedding. Thread "laplacian_exp" is diag(e^{1}, e^{4}, …, e^{n²}).
GalleryFamily matrix_tower(int max_n);

AlgebraicStructure matrix_product();

/// Thread of diagonal matrices diag(entry(1), …, entry(n)) on the matrix tower.
Thread diagonal_thread(const FamilyPtr& matrix_family, std::function<double(int)> entry);

/// Four levels on A = {I, J, K, L} with I ≤ J, K ≤ L: a point, the x-axis,
/// the y-axis and the plane.
GalleryFamily cross_family();

/// The reflection in {x = y}: J and K are exchanged, f_L(x, y) = (y, x).
ProfiniteMap cross_swap(const FamilyPtr& cross);

/// Times i/size for i = 1..size.
ParamSet dyadic_pool(int size);

/// Evaluations of paths γ: [0, 1] → R^n with γ(0) = 0 on finite time sets.
/// The level of K has dimension n·|K|, ordered by time then component.
/// Projections drop times; injections interpolate piecewise linearly from the
/// anchor γ(0) = 0 and stay constant after the last knot.
GalleryFamily wiener_family(int pool_size = 8, int components = 1);

int wiener_components(const ProfiniteFamily& wiener);

/// PL interpolation of knot values at the times `at`, with the same rules as
/// the injections. Throws TimeOutOfRange outside (0, 1].
Vector pl_interpolate(const ParamSet& knots, const Vector& values, const ParamSet& at, int components);

/// The thread of the PL path through (knots, values).
Thread wiener_path_thread(const FamilyPtr& wiener, const ParamSet& knots, const Vector& values);

/// ⟨α, h⟩ = Σ_i ξ_i · h(t_i) for the cylindrical 1-form α = (t_i, ξ_i).
/// Throws TimeOutOfRange for times outside (0, 1].
double wiener_pairing(const ParamSet& times, const Vector& xi, const std::function<Vector(double)>& h);

/// Brownian finite-dimensional distributions: Gaussian increments with
/// variance Δt per component. Deterministic in the seed; not shareable
/// across threads.
class WienerSampler {
 public:
  WienerSampler(FamilyPtr wiener, std::uint64_t seed);

  /// Values at the given times (sorted, in (0, 1]).
  Vector sample_at(const ParamSet& times);
  /// A point on the one-member section {pool}.
  SectionPoint sample();

 private:
  FamilyPtr family_;
  int components_;
  std::mt19937_64 rng_;
};

/// R^{2n} indexed by the dimension 2, 4, …, 2·max_pairs, with
/// ω = Σ dx_{2i} ∧ dx_{2i+1} and the dot product (hermitian for the
/// standard complex structure).
GalleryFamily symplectic_even_tower(int max_pairs);

/// The same form on every R^n, n = 1..2·max_pairs+1: degenerate on odd levels.
GalleryFamily symplectic_odd_tower(int max_pairs);

/// Σ dx_{2i} ∧ dx_{2i+1} over the pairs that fit in each level.
TameForm darboux_form(const FamilyPtr& family);

/// ½ Σ_{k < dim(level)} x_k², cylindrical on the section {level}.
CylindricalFunction oscillator(const FamilyPtr& family, const Index& level);

/// One rotation generator [[0,−1],[1,0]] per (q_i, p_i) pair.
ProfiniteGroupAction torus_action(const FamilyPtr& even_tower);

/// μ(ξ) = sign · ½ Σ ξ_i (q_i² + p_i²); sign = −1 is the momentum map of
/// torus_action.
MomentumMap torus_momentum(const FamilyPtr& even_tower, double sign = -1.0);

/// A = {1, 2}, E_I = R^I, with the constant metric [[0,1],[1,0]] on level 2
/// (metric "offdiag") and its pullback 0 on level 1.
GalleryFamily offdiag_pair();

/// Identity maps on `levels` copies of R^dim, with a constant Gram matrix.
GalleryFamily constant_metric_family(int levels, const Matrix& gram);

struct GalleryEntry {
  std::string name;
  std::string description;
  std::string size_param;
  int default_size;
};

const std::vector<GalleryEntry>& gallery_catalog();

/// Builds a catalog entry; size < 0 selects the default. Throws
/// std::invalid_argument for unknown names.
GalleryFamily make_gallery(const std::string& name, int size = -1);

struct AuditSettings {
  int points = 100;             // random points per chain, pair or level
  std::size_t max_chains = 200;
  double tol = kLinearTol;
  std::uint64_t seed = 0;
};

/// Structural axioms over chains of the sample levels, then every
/// distinguished thread (check_thread), form (check_tame, prefix "form:<name>.")
/// and metric (metric_check, prefix "metric:<name>.").
Report audit_gallery(const GalleryFamily& g, const AuditSettings& settings = {});

}  // namespace profinite
