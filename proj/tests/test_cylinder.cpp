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

DifferentiableMap square() {
  return DifferentiableMap(
      1, 1, [](const Vector& x) { return vec({x[0] * x[0]}); }, [](const Vector& x) -> Matrix {
        return Matrix::Constant(1, 1, 2 * x[0]);
      });
}

/// Euclidean thread (3, 4, 5, ...).
Thread counting_thread(const FamilyPtr& euclid) {
  return Thread(euclid, [](const Index& j) { return Vector(Vector::LinSpaced(j.integer(), 3.0, 2.0 + j.integer())); });
}

}  // namespace

TEST_CASE("evaluation") {
  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.5}, vec({2.0}));
  CylindricalFunction f(wiener, Section{Index::params({0.5})}, square());
  CHECK(eval(f, path) == 4.0);

  auto euclid = euclid_tower(6).family;
  auto t = counting_thread(euclid);
  CHECK(eval(CylindricalFunction::constant(euclid, Section{2}, 1.5), t) == 1.5);

  auto x1 = CylindricalFunction::coordinate(euclid, 3, 0);
  CHECK(eval(x1, t) == 3.0);
  auto rep = representative(x1, t);
  CHECK(eval(x1, thread_from_section(euclid, rep)) == 3.0);

  CHECK_THROWS_AS(eval(x1, path), FamilyMismatch);
}

TEST_CASE("representatives depend on the section, values do not") {
  auto euclid = euclid_tower(6).family;
  auto t = counting_thread(euclid);
  auto f = CylindricalFunction::coordinate(euclid, 2, 1);
  auto rep = representative(f, t);
  CHECK(rep.values.at(2) == vec({3, 4}));
  auto g = f.refine(Section{3});
  auto rep3 = representative(g, t);
  CHECK(rep3.values.at(3) == vec({3, 4, 5}));
  CHECK(eval(g, t) == eval(f, t));
  CHECK_THROWS_AS(f.refine(Section{1}), std::invalid_argument);

  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.5}, vec({2.0}));
  CylindricalFunction w(wiener, Section{Index::params({0.5})}, square());
  CHECK(representative(w, path).values.at(Index::params({0.5})) == vec({2.0}));
}

TEST_CASE("section enlargement leaves values unchanged") {
  auto euclid = euclid_tower(8).family;
  std::mt19937_64 rng(21);
  for (int s = 0; s < 100; ++s) {
    const int level = 1 + static_cast<int>(rng() % 4);
    const int coord = static_cast<int>(rng() % level);
    auto f = CylindricalFunction::coordinate(euclid, level, coord);
    const int finer = level + static_cast<int>(rng() % (9 - level));
    Vector top = random_point(8, rng);
    Thread t(euclid, [top](const Index& j) { return Vector(top.head(j.integer())); });
    CHECK(std::abs(eval(f.refine(Section{finer}), t) - eval(f, t)) <= 1e-12);
    CHECK(eval(f, thread_from_section(euclid, representative(f, t))) == eval(f, t));
  }
}

TEST_CASE("separation") {
  auto euclid = euclid_tower(6).family;
  Thread x = counting_thread(euclid);
  Thread y(euclid, [](const Index& j) {
    Vector v = Vector::LinSpaced(j.integer(), 3.0, 2.0 + j.integer());
    if (v.size() > 1) v[1] = 5;
    return v;
  });
  std::vector<Index> witnesses = {1, 2, 3};
  auto f = separate(x, y, witnesses);
  REQUIRE(f);
  CHECK(f->section() == Section{2});
  CHECK(std::abs(eval(*f, x) - eval(*f, y)) == 1.0);
  CHECK_FALSE(separate(x, x, witnesses));

  auto g = matrix_tower(4);
  auto id = neutral_thread(matrix_product(), g.family);
  std::vector<Index> one = {1};
  auto h = separate(g.threads.at("laplacian_exp"), id, one);
  REQUIRE(h);
  CHECK(std::abs(eval(*h, g.threads.at("laplacian_exp")) - eval(*h, id)) == doctest::Approx(std::exp(1.0) - 1.0));
}

TEST_CASE("separation succeeds whenever a witness level differs") {
  auto euclid = euclid_tower(6).family;
  std::mt19937_64 rng(99);
  std::vector<Index> witnesses = {1, 2, 3, 4, 5, 6};
  for (int s = 0; s < 100; ++s) {
    Vector a = random_point(6, rng);
    Vector b = a;
    const int k = static_cast<int>(rng() % 6);
    b[k] += 0.1 + 0.5 * std::abs(b[k]);
    Thread x(euclid, [a](const Index& j) { return Vector(a.head(j.integer())); });
    Thread y(euclid, [b](const Index& j) { return Vector(b.head(j.integer())); });
    // Brute-force witness scan: the first level where the threads differ.
    int first = -1;
    for (int j = 1; j <= 6 && first < 0; ++j)
      if (x(j) != y(j)) first = j;
    auto f = separate(x, y, witnesses);
    REQUIRE(f);
    CHECK(f->section() == Section{first});
    CHECK(std::abs(eval(*f, x) - eval(*f, y)) > 0.0);
  }
}

TEST_CASE("differentials") {
  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.5}, vec({2.0}));
  CylindricalFunction f(wiener, Section{Index::params({0.5})}, square());
  CHECK(differential(f, path) == vec({4.0}));

  auto euclid = euclid_tower(4).family;
  auto t = counting_thread(euclid);
  CHECK(differential(CylindricalFunction::constant(euclid, Section{3}, 2.0), t).cwiseAbs().maxCoeff() == 0.0);
  DifferentiableMap product(2, 1, [](const Vector& x) { return vec({x[0] * x[1]}); });
  CylindricalFunction xy(euclid, Section{2}, product);
  Vector grad = differential(xy, t);
  CHECK(std::abs(grad[0] - 4.0) <= 1e-6);
  CHECK(std::abs(grad[1] - 3.0) <= 1e-6);
}

TEST_CASE("cylindrical polynomials") {
  auto euclid = euclid_tower(4).family;
  auto t = counting_thread(euclid);
  auto x1 = CylPolynomial::of(CylindricalFunction::coordinate(euclid, 1, 0));
  auto x2 = CylPolynomial::of(CylindricalFunction::coordinate(euclid, 2, 1));
  CHECK((x1 + x2).evaluate(t) == 7.0);
  CHECK((x1 * x2).evaluate(t) == 12.0);
  auto as_cyl = (x1 * x2 + 2.0 * x1).to_cylindrical(euclid);
  CHECK(as_cyl.section() == Section{2});
  CHECK(eval(as_cyl, t) == 18.0);

  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.5}, vec({2.0}));
  const double p[] = {-1.0, 0.0, 1.0};
  auto gamma = CylindricalFunction::coordinate(wiener, Index::params({0.5}), 0);
  CHECK(CylPolynomial::univariate(p, gamma).evaluate(path) == 3.0);

  auto gamma2 = CylindricalFunction::coordinate(wiener, Index::params({0.25}), 0);
  auto joined = (CylPolynomial::of(gamma) * CylPolynomial::of(gamma2)).to_cylindrical(wiener);
  CHECK(joined.section() == Section{Index::params({0.25, 0.5})});
  CHECK(eval(joined, path) == 2.0 * 1.0);

  auto antichain = std::make_shared<FinitePoset>(std::vector<std::string>{"a", "b"},
                                                 std::vector<std::vector<bool>>{{true, false}, {false, true}});
  auto flat = constant_family(antichain, 1);
  auto fa = CylPolynomial::of(CylindricalFunction::coordinate(flat, 0, 0));
  auto fb = CylPolynomial::of(CylindricalFunction::coordinate(flat, 1, 0));
  CHECK_THROWS_AS((fa * fb).to_cylindrical(flat), JoinFailure);
}

TEST_CASE("expression language") {
  auto wiener = wiener_family(4).family;
  auto path = wiener_path_thread(wiener, {0.5}, vec({2.0}));
  auto e = Expression::parse("sqr(level:{0.5}:0) - 1", wiener->poset());
  CHECK(e.references().size() == 1);
  auto f = e.compile(wiener);
  CHECK(eval(f, path) == doctest::Approx(3.0));

  auto euclid = euclid_tower(4).family;
  auto t = counting_thread(euclid);
  auto g = Expression::parse("level:3:0 * level:2:1 + exp(0) + 2^3", euclid->poset()).compile(euclid);
  CHECK(g.section() == Section{3});
  CHECK(eval(g, t) == doctest::Approx(3.0 * 4.0 + 1.0 + 8.0));
  Vector grad = differential(g, t);
  CHECK(grad == vec({4.0, 3.0, 0.0}));

  auto cross = cross_family().family;
  auto h = Expression::parse("level:J:0 + sin(level:K:0)", cross->poset()).compile(cross);
  CHECK(h.section() == Section{Index(1), Index(2)});

  CHECK_THROWS_AS(Expression::parse("level:3:0 +", euclid->poset()), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(1)", euclid->poset()), ParseError);
  CHECK_THROWS_AS(Expression::parse("2^level:1:0", euclid->poset()), ParseError);
  CHECK_THROWS_AS(Expression::parse("level:99:0", euclid->poset()), ParseError);
}
