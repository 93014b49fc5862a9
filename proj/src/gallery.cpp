#include "profinite/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "profinite/errors.hpp"

namespace profinite {

namespace {

std::vector<Index> chain_levels(std::int64_t lo, std::int64_t hi, std::int64_t step = 1) {
  std::vector<Index> out;
  for (std::int64_t n = lo; n <= hi; n += step) out.emplace_back(n);
  return out;
}

FamilyPtr truncation_tower(std::string name, std::int64_t lo, std::int64_t hi, std::int64_t step,
                           std::function<int(std::int64_t)> dim) {
  auto poset = std::make_shared<ChainPoset>(lo, hi, step);
  auto d = [dim](const Index& j) { return dim(j.integer()); };
  return std::make_shared<ProfiniteFamily>(
      std::move(name), poset, d,
      [d](const Index& lo_, const Index& hi_) { return DifferentiableMap::linear(truncation_matrix(d(lo_), d(hi_))); },
      [d](const Index& lo_, const Index& hi_) {
        return DifferentiableMap::linear(truncation_matrix(d(lo_), d(hi_)).transpose());
      });
}

CompatibleMetric constant_gram(const FamilyPtr& family, MetricType type, std::function<Matrix(int)> gram) {
  return {family, type, [family, gram](const Index& j, const Vector&) { return gram(family->dim(j)); }};
}

void check_cap(int cap, const char* what) {
  if (cap < 1) throw std::invalid_argument(std::string(what) + " must be at least 1");
}

}  // namespace

Matrix truncation_matrix(int m, int n) { return Matrix::Identity(m, n); }

GalleryFamily euclid_tower(int max_level) {
  check_cap(max_level, "max_level");
  GalleryFamily g;
  g.name = "euclid_tower";
  g.description = "R^n for n = 1..max_level; truncation and zero padding";
  g.params["max_level"] = max_level;
  g.family = truncation_tower(g.name, 1, max_level, 1, [](std::int64_t n) { return static_cast<int>(n); });
  g.sample_levels = chain_levels(1, max_level);
  const auto family = g.family;
  g.forms.emplace("radial", TameForm(family, 1, [family](const Index& j) {
                    const int n = family->dim(j);
                    PolyComponents comps;
                    for (int k = 0; k < n; ++k) comps.emplace(std::vector<int>{k}, Polynomial::variable(n, k));
                    return FormField(1, n, std::move(comps));
                  }));
  g.metrics.emplace("euclidean", constant_gram(family, MetricType::Riemannian,
                                               [](int n) -> Matrix { return Matrix::Identity(n, n); }));
  g.metrics.emplace("lorentz", constant_gram(family, MetricType::PseudoRiemannian, [](int n) -> Matrix {
                      Matrix m = -Matrix::Identity(n, n);
                      m(0, 0) = 1.0;
                      return m;
                    }));
  return g;
}

GalleryFamily poly_tower(int max_degree) {
  check_cap(max_degree, "max_degree");
  GalleryFamily g;
  g.name = "poly_tower";
  g.description = "polynomials of degree <= n, n = 0..max_degree; truncation and zero padding";
  g.params["max_degree"] = max_degree;
  g.family = truncation_tower(g.name, 0, max_degree, 1, [](std::int64_t n) { return static_cast<int>(n + 1); });
  g.sample_levels = chain_levels(0, max_degree);
  g.threads.emplace("exp_series", Thread(g.family, [](const Index& j) {
                      Vector v(j.integer() + 1);
                      double c = 1.0;
                      for (Eigen::Index k = 0; k < v.size(); ++k) {
                        if (k > 0) c /= static_cast<double>(k);
                        v[k] = c;
                      }
                      return v;
                    }));
  g.metrics.emplace("euclidean", constant_gram(g.family, MetricType::Riemannian,
                                               [](int n) -> Matrix { return Matrix::Identity(n, n); }));
  return g;
}

namespace {

Vector truncated_product_of(const Vector& a, const Vector& b) {
  const Eigen::Index n = a.size();
  Vector c = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; i + k < n; ++k) c[i + k] += a[i] * b[k];
  return c;
}

}  // namespace

AlgebraicStructure truncated_product() {
  return {"truncated_product", [](const Index&, const Vector& a, const Vector& b) { return truncated_product_of(a, b); },
          [](const Index&, const Vector& a) -> std::optional<Vector> {
            // Power series inverse, possible iff a_0 ≠ 0.
            if (a.size() == 0 || a[0] == 0.0) return std::nullopt;
            Vector inv = Vector::Zero(a.size());
            inv[0] = 1.0 / a[0];
            for (Eigen::Index n = 1; n < a.size(); ++n) {
              double s = 0.0;
              for (Eigen::Index k = 1; k <= n; ++k) s += a[k] * inv[n - k];
              inv[n] = -s / a[0];
            }
            return inv;
          },
          [](const Index& j) {
            Vector e = Vector::Zero(j.integer() + 1);
            e[0] = 1.0;
            return e;
          }};
}

AlgebraicStructure cyclic_product() {
  return {"cyclic_product",
          [](const Index&, const Vector& a, const Vector& b) {
            const Eigen::Index n = a.size();
            Vector c = Vector::Zero(n);
            for (Eigen::Index i = 0; i < n; ++i)
              for (Eigen::Index k = 0; k < n; ++k) c[(i + k) % n] += a[i] * b[k];
            return c;
          },
          {},
          [](const Index& j) {
            Vector e = Vector::Zero(j.integer() + 1);
            e[0] = 1.0;
            return e;
          }};
}

namespace {

int side_of(const Vector& v) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw DimensionMismatch("matrix level vector of size " + std::to_string(v.size()));
  return n;
}

Matrix block_selector(int m, int n) {
  Matrix s = Matrix::Zero(m * m, n * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s(i * m + j, i * n + j) = 1.0;
  return s;
}

}  // namespace

GalleryFamily matrix_tower(int max_n) {
  check_cap(max_n, "max_n");
  GalleryFamily g;
  g.name = "matrix_tower";
  g.description = "M_n(R), n = 1..max_n, row-major; top-left block truncation and corner embedding";
  g.params["max_n"] = max_n;
  auto poset = std::make_shared<ChainPoset>(1, max_n);
  g.family = std::make_shared<ProfiniteFamily>(
      g.name, poset, [](const Index& j) { return static_cast<int>(j.integer() * j.integer()); },
      [](const Index& lo, const Index& hi) {
        return DifferentiableMap::linear(block_selector(int(lo.integer()), int(hi.integer())));
      },
      [](const Index& lo, const Index& hi) {
        return DifferentiableMap::linear(block_selector(int(lo.integer()), int(hi.integer())).transpose());
      });
  g.sample_levels = chain_levels(1, max_n);
  g.threads.emplace("laplacian_exp",
                    diagonal_thread(g.family, [](int k) { return std::exp(static_cast<double>(k) * k); }));
  return g;
}

AlgebraicStructure matrix_product() {
  return {"matrix_product",
          [](const Index&, const Vector& a, const Vector& b) {
            const int n = side_of(a);
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> ma(a.data(), n, n);
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mb(b.data(), n, n);
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c = ma * mb;
            return Vector(Eigen::Map<const Vector>(c.data(), c.size()));
          },
          [](const Index&, const Vector& a) -> std::optional<Vector> {
            const int n = side_of(a);
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> ma(a.data(), n, n);
            Eigen::FullPivLU<Matrix> lu(ma);
            if (!lu.isInvertible()) return std::nullopt;
            Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv = lu.inverse();
            return Vector(Eigen::Map<const Vector>(inv.data(), inv.size()));
          },
          [](const Index& j) {
            const int n = static_cast<int>(j.integer());
            Vector e = Vector::Zero(n * n);
            for (int i = 0; i < n; ++i) e[i * n + i] = 1.0;
            return e;
          }};
}

Thread diagonal_thread(const FamilyPtr& matrix_family, std::function<double(int)> entry) {
  return Thread(matrix_family, [entry](const Index& j) {
    const int n = static_cast<int>(j.integer());
    Vector v = Vector::Zero(n * n);
    for (int k = 1; k <= n; ++k) v[(k - 1) * n + (k - 1)] = entry(k);
    return v;
  });
}

GalleryFamily cross_family() {
  GalleryFamily g;
  g.name = "cross_family";
  g.description = "A = {I, J, K, L}: a point, the x-axis, the y-axis and the plane";
  // Order: I, J, K, L.
  std::vector<std::vector<bool>> leq = {
      {true, true, true, true}, {false, true, false, true}, {false, false, true, true}, {false, false, false, true}};
  auto poset = std::make_shared<FinitePoset>(std::vector<std::string>{"I", "J", "K", "L"}, leq);
  const Index I(0), J(1), K(2), L(3);
  std::map<Index, int> dims = {{I, 0}, {J, 1}, {K, 1}, {L, 2}};
  Matrix to_x(1, 2), to_y(1, 2);
  to_x << 1, 0;
  to_y << 0, 1;
  std::map<std::pair<Index, Index>, DifferentiableMap> proj = {
      {{I, J}, DifferentiableMap::linear(Matrix(0, 1))},
      {{I, K}, DifferentiableMap::linear(Matrix(0, 1))},
      {{J, L}, DifferentiableMap::linear(to_x)},
      {{K, L}, DifferentiableMap::linear(to_y)},
  };
  std::map<std::pair<Index, Index>, DifferentiableMap> inj = {
      {{I, J}, DifferentiableMap::linear(Matrix(1, 0))},
      {{I, K}, DifferentiableMap::linear(Matrix(1, 0))},
      {{J, L}, DifferentiableMap::linear(to_x.transpose())},
      {{K, L}, DifferentiableMap::linear(to_y.transpose())},
  };
  g.family = ProfiniteFamily::from_stored_maps(g.name, poset, dims, proj, inj);
  g.sample_levels = {I, J, K, L};
  return g;
}

ProfiniteMap cross_swap(const FamilyPtr& cross) {
  return ProfiniteMap(
      cross, cross,
      [](const Index& j) {
        if (j == Index(1)) return Index(2);
        if (j == Index(2)) return Index(1);
        return j;
      },
      [cross](const Index& j) {
        if (j == Index(3)) {
          Matrix s(2, 2);
          s << 0, 1, 1, 0;
          return DifferentiableMap::linear(s);
        }
        return DifferentiableMap::identity(cross->dim(j));
      });
}

// ------------------------------------------------------------------- Wiener

ParamSet dyadic_pool(int size) {
  check_cap(size, "pool size");
  ParamSet pool;
  for (int i = 1; i <= size; ++i) pool.push_back(static_cast<double>(i) / size);
  return pool;
}

namespace {

void check_times(const ParamSet& times) {
  for (double t : times)
    if (!(t > 0.0 && t <= 1.0)) throw TimeOutOfRange("time " + std::to_string(t) + " outside (0, 1]");
}

/// Row weights of the PL interpolant at t over the knots (anchor 0 implicit).
std::vector<std::pair<std::size_t, double>> pl_weights(const ParamSet& knots, double t) {
  if (knots.empty()) return {};
  auto upper = std::lower_bound(knots.begin(), knots.end(), t);
  if (upper == knots.end()) return {{knots.size() - 1, 1.0}};
  const std::size_t b = static_cast<std::size_t>(upper - knots.begin());
  if (*upper == t) return {{b, 1.0}};
  const double tb = *upper;
  if (b == 0) return {{0, t / tb}};
  const double ta = knots[b - 1];
  const double w = (t - ta) / (tb - ta);
  return {{b - 1, 1.0 - w}, {b, w}};
}

Matrix pl_matrix(const ParamSet& knots, const ParamSet& at, int n) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(at.size()) * n, static_cast<Eigen::Index>(knots.size()) * n);
  for (std::size_t r = 0; r < at.size(); ++r)
    for (const auto& [col, w] : pl_weights(knots, at[r]))
      for (int c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r) * n + c, static_cast<Eigen::Index>(col) * n + c) = w;
  return m;
}

Matrix drop_times(const ParamSet& kept, const ParamSet& all, int n) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(kept.size()) * n, static_cast<Eigen::Index>(all.size()) * n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    auto it = std::find(all.begin(), all.end(), kept[r]);
    if (it == all.end()) throw NotComparable("time set is not a subset");
    const auto col = static_cast<Eigen::Index>(it - all.begin());
    for (int c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r) * n + c, col * n + c) = 1.0;
  }
  return m;
}

std::vector<Index> small_subsets(const ParamSet& pool, std::size_t max_size) {
  std::vector<Index> out;
  std::vector<double> current;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    out.push_back(Index::params(current));
    if (current.size() == max_size) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      current.push_back(pool[i]);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
  if (pool.size() > max_size) out.push_back(Index::params(pool));
  return out;
}

}  // namespace

GalleryFamily wiener_family(int pool_size, int components) {
  check_cap(components, "components");
  GalleryFamily g;
  g.name = "wiener_family";
  g.description = "paths from 0 in R^n evaluated on finite time sets; PL interpolation as injection";
  g.params["pool_size"] = pool_size;
  g.params["components"] = components;
  const ParamSet pool = dyadic_pool(pool_size);
  auto poset = std::make_shared<FiniteSubsetPoset>(0.0, 1.0, pool);
  const int n = components;
  g.family = std::make_shared<ProfiniteFamily>(
      g.name, poset, [n](const Index& j) { return n * static_cast<int>(j.param_set().size()); },
      [n](const Index& lo, const Index& hi) {
        return DifferentiableMap::linear(drop_times(lo.param_set(), hi.param_set(), n));
      },
      [n](const Index& lo, const Index& hi) {
        return DifferentiableMap::linear(pl_matrix(lo.param_set(), hi.param_set(), n));
      });
  g.sample_levels = small_subsets(pool, 3);
  return g;
}

int wiener_components(const ProfiniteFamily& wiener) {
  const Index single = Index::params({1.0});
  return wiener.dim(single);
}

Vector pl_interpolate(const ParamSet& knots, const Vector& values, const ParamSet& at, int components) {
  check_times(knots);
  check_times(at);
  if (values.size() != static_cast<Eigen::Index>(knots.size()) * components)
    throw DimensionMismatch("knot values do not match the knots");
  return pl_matrix(knots, at, components) * values;
}

Thread wiener_path_thread(const FamilyPtr& wiener, const ParamSet& knots, const Vector& values) {
  const int n = wiener_components(*wiener);
  const ParamSet sorted = Index::params(knots).param_set();
  if (sorted.size() != knots.size() || sorted != knots) throw std::invalid_argument("knots must be increasing");
  check_times(knots);
  if (values.size() != static_cast<Eigen::Index>(knots.size()) * n)
    throw DimensionMismatch("knot values do not match the knots");
  return Thread(wiener, [knots, values, n](const Index& j) { return pl_interpolate(knots, values, j.param_set(), n); });
}

double wiener_pairing(const ParamSet& times, const Vector& xi, const std::function<Vector(double)>& h) {
  check_times(times);
  if (times.empty()) return 0.0;
  if (xi.size() % static_cast<Eigen::Index>(times.size()) != 0)
    throw DimensionMismatch("covector size is not a multiple of the number of times");
  const Eigen::Index n = xi.size() / static_cast<Eigen::Index>(times.size());
  double total = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Vector v = h(times[i]);
    if (v.size() != n) throw DimensionMismatch("path value has the wrong number of components");
    for (Eigen::Index c = 0; c < n; ++c) total += xi[static_cast<Eigen::Index>(i) * n + c] * v[c];
  }
  return total;
}

WienerSampler::WienerSampler(FamilyPtr wiener, std::uint64_t seed)
    : family_(std::move(wiener)), components_(wiener_components(*family_)), rng_(seed) {}

Vector WienerSampler::sample_at(const ParamSet& times) {
  check_times(times);
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("sample times must be sorted");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(static_cast<Eigen::Index>(times.size()) * components_);
  Vector current = Vector::Zero(components_);
  double previous = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double sd = std::sqrt(times[i] - previous);
    for (int c = 0; c < components_; ++c) current[c] += sd * normal(rng_);
    out.segment(static_cast<Eigen::Index>(i) * components_, components_) = current;
    previous = times[i];
  }
  return out;
}

SectionPoint WienerSampler::sample() {
  const auto& poset = dynamic_cast<const FiniteSubsetPoset&>(family_->poset());
  const Index top = Index::params(*poset.pool());
  SectionPoint p{Section({top}), {}};
  p.values.emplace(top, sample_at(top.param_set()));
  return p;
}

// --------------------------------------------------------------- symplectic

TameForm darboux_form(const FamilyPtr& family) {
  return TameForm(family, 2, [family](const Index& j) {
    const int n = family->dim(j);
    PolyComponents comps;
    for (int i = 0; 2 * i + 1 < n; ++i) comps.emplace(std::vector<int>{2 * i, 2 * i + 1}, Polynomial::constant(n, 1.0));
    return FormField(2, n, std::move(comps));
  });
}

GalleryFamily symplectic_even_tower(int max_pairs) {
  check_cap(max_pairs, "max_pairs");
  GalleryFamily g;
  g.name = "symplectic_even_tower";
  g.description = "R^{2n} indexed by the dimension, omega = sum dx_{2i} ^ dx_{2i+1}";
  g.params["max_pairs"] = max_pairs;
  g.family = truncation_tower(g.name, 2, 2 * max_pairs, 2, [](std::int64_t n) { return static_cast<int>(n); });
  g.sample_levels = chain_levels(2, 2 * max_pairs, 2);
  g.forms.emplace("omega", darboux_form(g.family));
  g.metrics.emplace("euclidean", constant_gram(g.family, MetricType::Hermitian,
                                               [](int n) -> Matrix { return Matrix::Identity(n, n); }));
  return g;
}

GalleryFamily symplectic_odd_tower(int max_pairs) {
  check_cap(max_pairs, "max_pairs");
  GalleryFamily g;
  g.name = "symplectic_odd_tower";
  g.description = "R^n for n = 1..2*max_pairs+1 with omega = sum dx_{2i} ^ dx_{2i+1}";
  g.params["max_pairs"] = max_pairs;
  g.family = truncation_tower(g.name, 1, 2 * max_pairs + 1, 1, [](std::int64_t n) { return static_cast<int>(n); });
  g.sample_levels = chain_levels(1, 2 * max_pairs + 1);
  g.forms.emplace("omega", darboux_form(g.family));
  return g;
}

CylindricalFunction oscillator(const FamilyPtr& family, const Index& level) {
  const int n = family->dim(level);
  DifferentiableMap base(
      n, 1, [](const Vector& x) { return Vector::Constant(1, 0.5 * x.squaredNorm()); },
      [](const Vector& x) -> Matrix { return x.transpose(); });
  return CylindricalFunction(family, Section({level}), std::move(base));
}

ProfiniteGroupAction torus_action(const FamilyPtr& even_tower) {
  auto generators = [even_tower](const Index& j) {
    const int n = even_tower->dim(j);
    std::vector<Matrix> gens;
    for (int i = 0; 2 * i + 1 < n; ++i) {
      Matrix g = Matrix::Zero(n, n);
      g(2 * i, 2 * i + 1) = -1.0;
      g(2 * i + 1, 2 * i) = 1.0;
      gens.push_back(std::move(g));
    }
    return gens;
  };
  auto pairs = [even_tower](const Index& j) { return even_tower->dim(j) / 2; };
  return {even_tower, generators,
          [pairs](const Index& lo, const Index&, const Vector& xi) { return Vector(xi.head(pairs(lo))); },
          [pairs](const Index&, const Index& hi, const Vector& xi) {
            Vector out = Vector::Zero(pairs(hi));
            out.head(xi.size()) = xi;
            return out;
          }};
}

MomentumMap torus_momentum(const FamilyPtr& even_tower, double sign) {
  return {[even_tower, sign](const Index& level, const Vector& xi) {
    const int n = even_tower->dim(level);
    if (xi.size() != n / 2) throw DimensionMismatch("one coefficient per (q, p) pair expected");
    auto weights = [xi, n, sign]() {
      Vector w(n);
      for (int k = 0; k < n; ++k) w[k] = sign * xi[k / 2];
      return w;
    }();
    DifferentiableMap base(
        n, 1, [weights](const Vector& x) { return Vector::Constant(1, 0.5 * weights.dot(x.cwiseProduct(x))); },
        [weights](const Vector& x) -> Matrix { return weights.cwiseProduct(x).transpose(); });
    return CylindricalFunction(even_tower, Section({level}), std::move(base));
  }};
}

GalleryFamily offdiag_pair() {
  GalleryFamily g;
  g.name = "offdiag_pair";
  g.description = "A = {1, 2}, E_I = R^I, constant metric [[0,1],[1,0]] on level 2";
  g.family = truncation_tower(g.name, 1, 2, 1, [](std::int64_t n) { return static_cast<int>(n); });
  g.sample_levels = {Index(1), Index(2)};
  g.metrics.emplace("offdiag", constant_gram(g.family, MetricType::PseudoRiemannian, [](int n) -> Matrix {
                      Matrix m = Matrix::Zero(n, n);
                      if (n == 2) m << 0, 1, 1, 0;
                      return m;
                    }));
  return g;
}

GalleryFamily constant_metric_family(int levels, const Matrix& gram) {
  check_cap(levels, "levels");
  GalleryFamily g;
  g.name = "constant_metric_family";
  g.description = "identity maps between copies of R^dim with a constant Gram matrix";
  g.params["levels"] = levels;
  g.family = constant_family(std::make_shared<ChainPoset>(1, levels), static_cast<int>(gram.rows()), g.name);
  g.sample_levels = chain_levels(1, levels);
  const bool definite = Eigen::SelfAdjointEigenSolver<Matrix>(gram).eigenvalues().minCoeff() > 0.0;
  g.metrics.emplace("constant", CompatibleMetric{g.family,
                                                 definite ? MetricType::Riemannian : MetricType::PseudoRiemannian,
                                                 [gram](const Index&, const Vector&) { return gram; }});
  return g;
}

const std::vector<GalleryEntry>& gallery_catalog() {
  static const std::vector<GalleryEntry> entries = {
      {"euclid_tower", "R^n with truncations and zero padding", "max_level", 10},
      {"poly_tower", "polynomials by degree; carries the exp series thread", "max_degree", 10},
      {"jet_tower", "k-jets at 0, identical to poly_tower", "max_degree", 10},
      {"matrix_tower", "M_n(R) with corner embeddings; carries e^Laplacian", "max_n", 8},
      {"cross_family", "point, two axes and the plane over A = {I,J,K,L}", "", 0},
      {"wiener_family", "finite time evaluations of paths from 0", "pool_size", 8},
      {"symplectic_even_tower", "R^{2n} with the Darboux form", "max_pairs", 5},
      {"symplectic_odd_tower", "R^n with the Darboux form, degenerate on odd n", "max_pairs", 5},
      {"offdiag_pair", "R, R^2 with the metric [[0,1],[1,0]]", "", 0},
  };
  return entries;
}

GalleryFamily make_gallery(const std::string& name, int size) {
  const auto& catalog = gallery_catalog();
  auto it = std::find_if(catalog.begin(), catalog.end(), [&](const GalleryEntry& e) { return e.name == name; });
  if (it == catalog.end()) throw std::invalid_argument("unknown gallery family '" + name + "'");
  const int n = size < 0 ? it->default_size : size;
  if (name == "euclid_tower") return euclid_tower(n);
  if (name == "poly_tower") return poly_tower(n);
  if (name == "jet_tower") return jet_tower(n);
  if (name == "matrix_tower") return matrix_tower(n);
  if (name == "cross_family") return cross_family();
  if (name == "wiener_family") return wiener_family(n);
  if (name == "symplectic_even_tower") return symplectic_even_tower(n);
  if (name == "symplectic_odd_tower") return symplectic_odd_tower(n);
  return offdiag_pair();
}

Report audit_gallery(const GalleryFamily& g, const AuditSettings& settings) {
  const auto& poset = g.family->poset();
  const auto chains = sample_chains(poset, g.sample_levels, settings.max_chains, settings.seed);
  Report report = verify_family(*g.family, chains, settings.points, settings.tol, settings.seed);
  const auto pairs = comparable_pairs(poset, g.sample_levels);
  for (const auto& [name, thread] : g.threads)
    report.merge(check_thread(thread, pairs, settings.tol), "thread:" + name + ".");
  for (const auto& [name, form] : g.forms)
    report.merge(check_tame(form, pairs, std::max(1, settings.points / 10), settings.tol, settings.seed),
                 "form:" + name + ".");
  for (const auto& [name, metric] : g.metrics) {
    auto m = metric_check(metric, pairs, g.sample_levels, std::max(1, settings.points / 10), settings.tol,
                          settings.seed);
    report.merge(m.report, "metric:" + name + ".");
  }
  return report;
}

}  // namespace profinite
