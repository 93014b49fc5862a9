#include <doctest.h>

#include <cmath>

#include "profinite/errors.hpp"
#include "profinite/expr.hpp"
#include "profinite/gallery.hpp"

using namespace profinite;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Jᵀ M J: the 2-form pullback written out by hand.
Matrix pulled_matrix(const Matrix& m, const Matrix& jac) { return jac.transpose() * m * jac; }

TameForm constant_form(const FamilyPtr& f, int degree, std::function<AltTensor(const Index&)> value) {
  return TameForm(f, degree, [value](const Index& j) { return FormField::constant(value(j)); });
}

std::vector<std::pair<Index, Index>> chain_pairs(int lo, int hi) {
  std::vector<std::pair<Index, Index>> out;
  for (int a = lo; a <= hi; ++a)
    for (int b = a; b <= hi; ++b) out.emplace_back(a, b);
  return out;
}

}  // namespace

TEST_CASE("pullback along injections") {
  auto euclid = euclid_tower(3).family;
  auto w12 = constant_form(euclid, 2, [&](const Index& j) { return AltTensor::basis(int(j.integer()), {0, 1}); });
  auto w23 = constant_form(euclid, 2, [&](const Index& j) {
    return j.integer() == 3 ? AltTensor::basis(3, {1, 2}) : AltTensor(2, int(j.integer()));
  });
  Vector p = vec({0.3, -0.7});
  AltTensor a = pullback_inj(w12, 2, 3, p);
  CHECK(max_abs_diff(a, AltTensor::basis(2, {0, 1})) == 0.0);
  Matrix by_hand = pulled_matrix(AltTensor::basis(3, {0, 1}).as_matrix(), truncation_matrix(2, 3).transpose());
  CHECK(max_abs_diff(a.as_matrix(), by_hand) == 0.0);
  CHECK(pullback_inj(w23, 2, 3, p).max_abs() == 0.0);
  CHECK(max_abs_diff(pullback_inj(w12, 3, 3, vec({1, 2, 3})), AltTensor::basis(3, {0, 1})) == 0.0);
}

TEST_CASE("pullback along projections") {
  auto euclid = euclid_tower(3).family;
  auto dx1 = FormField::constant(AltTensor::basis(1, {0}));
  AltTensor up = pushforward_proj(euclid, dx1, 1, 3, vec({5, 6, 7}));
  CHECK(max_abs_diff(up, AltTensor::basis(3, {0})) == 0.0);
  CHECK(pushforward_proj(euclid, FormField::zero(1, 1), 1, 3, vec({5, 6, 7})).max_abs() == 0.0);

  auto w = FormField::constant(AltTensor::basis(2, {0, 1}));
  FormField pushed = pushforward_proj(euclid, w, 2, 3);
  TameForm tower(euclid, 2, [pushed, w](const Index& j) { return j.integer() == 3 ? pushed : w; });
  CHECK(max_abs_diff(pullback_inj(tower, 2, 3, vec({0.1, 0.2})), w(vec({0.1, 0.2}))) == 0.0);
}

TEST_CASE("dual retraction on random polynomial forms") {
  auto euclid = euclid_tower(5).family;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int s = 0; s < 50; ++s) {
    const int lo = 2 + int(rng() % 2), hi = lo + 1 + int(rng() % (5 - lo));
    PolyComponents comps;
    for (const auto& idx : increasing_multi_indices(lo, 2)) {
      Polynomial p(lo);
      p.add_term(std::vector<int>(lo, 0), coeff(rng));
      std::vector<int> e(lo, 0);
      e[rng() % lo] = 1 + int(rng() % 2);
      p.add_term(e, coeff(rng));
      comps.emplace(idx, p);
    }
    FormField alpha(2, lo, comps);
    FormField pushed = pushforward_proj(euclid, alpha, lo, hi);
    Vector x = random_point(lo, rng);
    AltTensor round = pushed.pullback(euclid->inj(lo, hi))(x);
    CHECK(max_abs_diff(round, alpha(x)) <= 1e-12);
  }
}

TEST_CASE("tame compatibility") {
  auto even = symplectic_even_tower(4);
  std::vector<std::pair<Index, Index>> pairs;
  for (int a = 2; a <= 8; a += 2)
    for (int b = a; b <= 8; b += 2) pairs.emplace_back(a, b);
  auto r = check_tame(even.forms.at("omega"), pairs, 20, 0.0, 1);
  CHECK(r.residual("tame_compatibility") == 0.0);

  Matrix gram(2, 2);
  gram << 2, 0.5, 0.5, 1;
  auto c = constant_metric_family(4, gram);
  auto cpairs = comparable_pairs(c.family->poset(), c.sample_levels);
  auto mr = metric_check(c.metrics.at("constant"), cpairs, c.sample_levels, 10, 1e-12);
  CHECK(mr.passed());
  CHECK(mr.report.residual("metric_compatibility") <= 1e-12);

  const double eps = 0.125;
  auto euclid = euclid_tower(4).family;
  auto perturbed = constant_form(euclid, 2, [eps](const Index& j) {
    AltTensor w = AltTensor::basis(int(j.integer()), {0, 1});
    if (j.integer() == 3) w.set({0, 1}, 1.0 + eps);
    return w;
  });
  std::vector<std::pair<Index, Index>> p23 = {{2, 3}};
  auto bad = check_tame(perturbed, p23, 5, 1e-9, 3);
  CHECK_FALSE(bad.passed());
  CHECK(bad.residual("tame_compatibility") == doctest::Approx(eps).epsilon(1e-12));
  std::vector<std::pair<Index, Index>> pass_pairs = {{2, 2}, {2, 4}, {4, 4}};
  CHECK(check_tame(perturbed, pass_pairs, 5, 0.0, 3).passed());
}

TEST_CASE("exterior derivative") {
  auto plane = euclid_tower(2).family;
  // ω = x dy on R².
  PolyComponents comps;
  comps.emplace(std::vector<int>{1}, Polynomial::variable(2, 0));
  FormField xdy(1, 2, comps);
  TameForm w(plane, 1, [xdy](const Index& j) { return j.integer() == 2 ? xdy : FormField::zero(1, 1); });
  auto dw = exterior_derivative(w);
  CHECK(dw.degree() == 2);
  CHECK(max_abs_diff(dw.level(2)(vec({0.4, -1.1})), AltTensor::basis(2, {0, 1})) == 0.0);

  FormField fd_xdy(1, 2, [](const Vector& x) {
    AltTensor t(1, 2);
    t.set({1}, x[0]);
    return t;
  });
  CHECK(max_abs_diff(fd_xdy.exterior_derivative()(vec({0.4, -1.1})), AltTensor::basis(2, {0, 1})) <= 1e-6);
  CHECK(FormField::constant(AltTensor::basis(2, {0})).exterior_derivative()(vec({1, 2})).max_abs() == 0.0);

  FormField sin_dx2(1, 3, [](const Vector& x) {
    AltTensor t(1, 3);
    t.set({1}, std::sin(x[0]));
    return t;
  });
  std::mt19937_64 rng(5);
  for (int s = 0; s < 20; ++s) {
    Vector x = random_point(3, rng, 2.0);
    AltTensor d1 = sin_dx2.exterior_derivative()(x);
    CHECK(std::abs(d1({0, 1}) - std::cos(x[0])) <= 1e-6);
    CHECK(sin_dx2.exterior_derivative().exterior_derivative()(x).max_abs() <= 1e-5);
  }
}

TEST_CASE("d commutes with pullback and squares to zero") {
  auto euclid = euclid_tower(4).family;
  std::mt19937_64 rng(11);
  for (int s = 0; s < 30; ++s) {
    const int n = 3 + int(rng() % 2);
    PolyComponents comps;
    for (const auto& idx : increasing_multi_indices(n, 1)) {
      Polynomial p(n);
      for (int t = 0; t < 3; ++t) {
        std::vector<int> e(n, 0);
        e[rng() % n] += 1 + int(rng() % 2);
        e[rng() % n] += int(rng() % 2);
        p.add_term(e, double(int(rng() % 7)) - 3.0);
      }
      comps.emplace(idx, p);
    }
    FormField w(1, n, comps);
    const auto inj = euclid->inj(n - 1, n);
    Vector x = random_point(n - 1, rng);
    CHECK(max_abs_diff(w.exterior_derivative().pullback(inj)(x), w.pullback(inj).exterior_derivative()(x)) <= 1e-12);
    CHECK(w.exterior_derivative().exterior_derivative()(random_point(n, rng)).max_abs() == 0.0);

    FormField black(1, n, [w](const Vector& y) { return w(y); });
    Vector y = random_point(n, rng);
    CHECK(max_abs_diff(black.exterior_derivative()(y), w.exterior_derivative()(y)) <= 1e-5);
  }
}

TEST_CASE("metric families") {
  auto e = euclid_tower(5);
  auto pairs = comparable_pairs(e.family->poset(), e.sample_levels);
  auto dot = metric_check(e.metrics.at("euclidean"), pairs, e.sample_levels, 10, 1e-9);
  CHECK(dot.passed());
  CHECK(dot.positive_definite);
  for (const auto& s : dot.spectra) CHECK(s.min_eigenvalue > 0.0);

  auto lorentz = metric_check(e.metrics.at("lorentz"), pairs, e.sample_levels, 10, 1e-9);
  CHECK(lorentz.passed());
  CHECK_FALSE(lorentz.positive_definite);
  CHECK(lorentz.nondegenerate);
  for (const auto& s : lorentz.spectra)
    if (s.dim >= 2) {
      CHECK(s.min_eigenvalue == doctest::Approx(-1.0));
      CHECK(s.max_eigenvalue == doctest::Approx(1.0));
    }

  auto od = offdiag_pair();
  auto opairs = comparable_pairs(od.family->poset(), od.sample_levels);
  auto off = metric_check(od.metrics.at("offdiag"), opairs, od.sample_levels, 5, 1e-9);
  CHECK(off.report.residual("metric_compatibility") == 0.0);
  CHECK_FALSE(off.positive_definite);
  CHECK_FALSE(off.nondegenerate);
  for (const auto& s : off.spectra)
    if (s.level == Index(1)) CHECK(s.rank == 0);

  CompatibleMetric forced = od.metrics.at("offdiag");
  forced.type = MetricType::Riemannian;
  CHECK_FALSE(metric_check(forced, opairs, od.sample_levels, 5, 1e-9).passed());

  auto even = symplectic_even_tower(3);
  auto epairs = comparable_pairs(even.family->poset(), even.sample_levels);
  auto herm = metric_check(even.metrics.at("euclidean"), epairs, even.sample_levels, 5, 1e-9);
  CHECK(herm.passed());
  CHECK(herm.report.has("complex_structure_invariance"));
}

TEST_CASE("complex structure") {
  Matrix j = complex_structure(4);
  CHECK(max_abs_diff(Matrix(j * j), Matrix(-Matrix::Identity(4, 4))) == 0.0);
  CHECK(j(1, 0) == 1.0);
  CHECK_THROWS_AS(complex_structure(3), DimensionMismatch);
}

TEST_CASE("tangent duality") {
  auto euclid = euclid_tower(5).family;
  Thread base(euclid, [](const Index& j) { return Vector(Vector::LinSpaced(j.integer(), 3.0, 2.0 + j.integer())); });
  TangentThread e1{base, [](const Index& j) {
                     Vector v = Vector::Zero(j.integer());
                     v[0] = 1.0;
                     return v;
                   }};
  auto pairs = chain_pairs(1, 5);
  CHECK(check_tangent_thread(e1, pairs, 1e-8).passed());
  CylindricalFunction x1sq(euclid, Section{1},
                           DifferentiableMap(1, 1, [](const Vector& x) { return vec({x[0] * x[0]}); }));
  CHECK(differential(x1sq, base)[0] == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(tangent_duality_check(x1sq, e1) <= 1e-6);
  CHECK(tangent_duality_check(CylindricalFunction::constant(euclid, Section{3}, 4.0), e1) == 0.0);

  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.25, 0.5}, vec({1.0, 2.0}));
  auto bump = wiener_path_thread(wiener, {0.25, 0.5, 0.75}, vec({0.0, 1.0, 0.0}));
  TangentThread v{path, [bump](const Index& j) { return bump(j); }};
  CylindricalFunction prod(wiener, Section{Index::params({0.25, 0.5})},
                           DifferentiableMap(2, 1, [](const Vector& x) { return vec({x[0] * x[1]}); }));
  CHECK(tangent_duality_check(prod, v) <= 1e-6);
  CHECK(differential(prod, path).dot(bump(Index::params({0.25, 0.5}))) == doctest::Approx(1.0));

  std::mt19937_64 rng(3);
  for (int s = 0; s < 20; ++s) {
    Vector top = random_point(5, rng), dir = random_point(5, rng);
    Thread t(euclid, [top](const Index& j) { return Vector(top.head(j.integer())); });
    TangentThread w{t, [dir](const Index& j) { return Vector(dir.head(j.integer())); }};
    CHECK(check_tangent_thread(w, pairs, 1e-8).passed());
    auto f = Expression::parse("sin(level:3:0) * level:4:3 + sqr(level:2:1)", euclid->poset()).compile(euclid);
    CHECK(tangent_duality_check(f, w) <= 1e-6);
  }
}
