#include <doctest.h>

#include <cmath>

#include "profinite/errors.hpp"
#include "profinite/gallery.hpp"

using namespace profinite;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::vector<Index> range(std::int64_t lo, std::int64_t hi) {
  std::vector<Index> out;
  for (auto n = lo; n <= hi; ++n) out.emplace_back(n);
  return out;
}

/// Polynomial thread from a coefficient list (zero beyond it).
Thread poly_thread(const FamilyPtr& poly, Vector coeffs) {
  return Thread(poly, [coeffs](const Index& j) {
    Vector v = Vector::Zero(j.integer() + 1);
    const auto n = std::min<Eigen::Index>(v.size(), coeffs.size());
    v.head(n) = coeffs.head(n);
    return v;
  });
}

}  // namespace

TEST_CASE("threads from sections") {
  auto poly = poly_tower(8).family;
  auto t = thread_from_section(poly, {Section{2}, {{Index(2), vec({1, 0, 1})}}});
  CHECK(t(1) == vec({1, 0}));
  CHECK(t(5) == vec({1, 0, 1, 0, 0, 0}));

  auto euclid = euclid_tower(6).family;
  auto e = thread_from_section(euclid, {Section{2}, {{Index(2), vec({3, 4})}}});
  CHECK(e(1) == vec({3}));
  CHECK(e(4) == vec({3, 4, 0, 0}));
  auto pairs = comparable_pairs(euclid->poset(), range(1, 6));
  CHECK(check_thread(e, pairs, 0.0).passed());
}

TEST_CASE("conflicting section data on the four-space family") {
  auto cross = cross_family().family;
  const Index I(0), J(1), K(2), L(3);
  SectionPoint p{Section{J, K}, {{J, vec({1})}, {K, vec({2})}}};
  CHECK_THROWS_AS(thread_from_section(cross, p), IllDefinedSection);
  // Only x = y = 0 is coherent over {J, K}.
  SectionPoint zero{Section{J, K}, {{J, vec({0})}, {K, vec({0})}}};
  auto t = thread_from_section(cross, zero);
  CHECK(t(I).size() == 0);
  CHECK(t(L) == vec({0, 0}));

  SectionPoint single{Section{J}, {{J, vec({1})}}};
  auto partial = thread_from_section(cross, single, std::vector<Index>{J, L});
  CHECK(partial(L) == vec({1, 0}));
  CHECK_THROWS_AS(partial(K), Incomparable);
}

TEST_CASE("round trip through a section") {
  auto euclid = euclid_tower(6).family;
  std::mt19937_64 rng(4);
  const auto levels = range(1, 6);
  for (int s = 0; s < 20; ++s) {
    const Index member(1 + static_cast<int>(rng() % 6));
    SectionPoint p{Section{member}, {{member, random_point(euclid->dim(member), rng)}}};
    auto t = thread_from_section(euclid, p);
    auto back = restrict_to(t, p.section);
    CHECK(back.values.at(member) == p.values.at(member));
    // Distinct data over the same section gives distinct threads.
    SectionPoint q = p;
    q.values.at(member)[0] += 0.5;
    CHECK(thread_distance_on(t, thread_from_section(euclid, q), std::vector<Index>{member}) > 0.0);
  }
}

TEST_CASE("check_thread detects a corrupted level") {
  auto g = matrix_tower(8);
  auto t = g.threads.at("laplacian_exp");
  std::vector<std::pair<Index, Index>> pairs;
  for (int n = 1; n < 8; ++n) pairs.emplace_back(n, n + 1);
  CHECK(check_thread(t, pairs, 0.0).residual("thread_consistency") == 0.0);

  auto series = poly_tower(10).threads.at("exp_series");
  CHECK(check_thread(series, comparable_pairs(*std::make_shared<ChainPoset>(0, 10), range(0, 10)), 0.0).passed());

  auto euclid = euclid_tower(4).family;
  Thread bad(euclid, [](const Index& j) {
    Vector v = Vector::Ones(j.integer());
    if (j == Index(3)) v[0] += 0.25;
    return v;
  });
  CHECK(check_thread(bad, comparable_pairs(euclid->poset(), range(1, 4)), 1e-9).residual("thread_consistency") ==
        doctest::Approx(0.25));
}

TEST_CASE("inductive limit membership") {
  auto poly = poly_tower(15).family;
  const auto sample = range(0, 15);
  std::vector<Section> candidates;
  for (int n = 0; n <= 10; ++n) candidates.push_back(Section{n});

  auto quadratic = poly_thread(poly, vec({1, 0, 1}));
  auto found = is_inductive(quadratic, candidates, sample, 1e-12);
  REQUIRE(found);
  CHECK(found->section == Section{2});

  auto series = poly_tower(15).threads.at("exp_series");
  Thread exp_on_poly(poly, [series](const Index& j) { return series(j); });
  CHECK_FALSE(is_inductive(exp_on_poly, candidates, sample, 1e-12));

  Thread zero(poly, [](const Index& j) { return Vector(Vector::Zero(j.integer() + 1)); });
  auto z = is_inductive(zero, candidates, sample, 0.0);
  REQUIRE(z);
  CHECK(z->section == Section{0});
}

TEST_CASE("lifting binary laws") {
  auto g = matrix_tower(5);
  auto pairs = comparable_pairs(g.family->poset(), range(1, 5));
  auto a = diagonal_thread(g.family, [](int k) { return k + 1.0; });
  auto b = diagonal_thread(g.family, [](int k) { return 0.5 * k; });
  auto prod = lift_binary(matrix_product(), a, b, pairs);
  auto expected = diagonal_thread(g.family, [](int k) { return (k + 1.0) * 0.5 * k; });
  CHECK(thread_distance_on(prod, expected, range(1, 5)) <= 1e-12);
  CHECK(check_thread(prod, pairs, 1e-9).passed());

  auto poly = poly_tower(6).family;
  auto ppairs = comparable_pairs(poly->poset(), range(0, 6));
  AlgebraicStructure sum{"sum", [](const Index&, const Vector& x, const Vector& y) { return Vector(x + y); },
                         [](const Index&, const Vector& x) -> std::optional<Vector> { return Vector(-x); },
                         [poly](const Index& j) { return Vector(Vector::Zero(poly->dim(j))); }};
  auto s = lift_binary(sum, poly_thread(poly, vec({1, 0, 1})), poly_thread(poly, vec({0, 1, 0, -1})), ppairs);
  CHECK(s(6) == vec({1, 1, 1, -1, 0, 0, 0}));

  // Products truncated at each degree are compatible with truncation.
  auto x_thread = poly_thread(poly, vec({0, 1}));
  CHECK_NOTHROW(lift_binary(truncated_product(), x_thread, x_thread, ppairs));
  // Cyclic products are not: X·X = 1 at degree 1 but X² at degree 2.
  std::vector<std::pair<Index, Index>> one_two = {{1, 2}};
  CHECK(cyclic_product().law(1, vec({0, 1}), vec({0, 1})) == vec({1, 0}));
  CHECK_THROWS_AS(lift_binary(cyclic_product(), x_thread, x_thread, one_two), MorphismViolation);
  try {
    lift_binary(cyclic_product(), x_thread, x_thread, one_two);
  } catch (const MorphismViolation& e) {
    CHECK(std::string(e.what()).find("residual 1") != std::string::npos);
  }
}

TEST_CASE("lifting inverses") {
  auto euclid = euclid_tower(4).family;
  auto pairs = comparable_pairs(euclid->poset(), range(1, 4));
  AlgebraicStructure sum{"sum", [](const Index&, const Vector& x, const Vector& y) { return Vector(x + y); },
                         [](const Index&, const Vector& x) -> std::optional<Vector> { return Vector(-x); },
                         [euclid](const Index& j) { return Vector(Vector::Zero(euclid->dim(j))); }};
  Thread x(euclid, [](const Index& j) { return Vector(Vector::LinSpaced(j.integer(), 1.0, double(j.integer()))); });
  auto neg = lift_inverse(sum, x, pairs);
  CHECK(thread_distance_on(lift_binary(sum, x, neg, pairs), neutral_thread(sum, euclid), range(1, 4)) == 0.0);

  auto g = matrix_tower(4);
  auto mpairs = comparable_pairs(g.family->poset(), range(1, 4));
  Thread upper(g.family, [](const Index& j) {
    const int n = int(j.integer());
    Vector v = Vector::Zero(n * n);
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) v[r * n + c] = r == c ? 2.0 + r : 0.5 * (c - r) + 1.0;
    return v;
  });
  auto inv = lift_inverse(matrix_product(), upper, mpairs);
  auto product = lift_binary(matrix_product(), upper, inv, mpairs);
  CHECK(thread_distance_on(product, neutral_thread(matrix_product(), g.family), range(1, 4)) <= 1e-10);

  Thread singular(g.family, [](const Index& j) { return Vector(Vector::Zero(j.integer() * j.integer())); });
  CHECK_THROWS_AS(lift_inverse(matrix_product(), singular, mpairs), NotInvertible);
}

TEST_CASE("scalar actions") {
  auto euclid = euclid_tower(5).family;
  auto scalars = constant_family(euclid->poset_ptr(), 1, "scalars");
  auto pairs = comparable_pairs(euclid->poset(), range(1, 5));
  Thread two(scalars, [](const Index&) { return vec({2}); });
  Thread x(euclid, [](const Index& j) {
    Vector v = Vector::Zero(j.integer());
    v[0] = 3;
    if (v.size() > 1) v[1] = 4;
    return v;
  });
  ScalarAction scale{"scale", [](const Index&, const Vector& r, const Vector& v) { return Vector(r[0] * v); }};
  auto y = lift_scalar_action(scale, two, x, pairs);
  CHECK(y(3) == vec({6, 8, 0}));

  auto poly = poly_tower(4).family;
  auto ppairs = comparable_pairs(poly->poset(), range(0, 4));
  ScalarAction shift{"add", [](const Index&, const Vector& r, const Vector& v) { return Vector(r + v); }};
  auto p = poly_thread(poly, vec({1, 2, 3}));
  CHECK(check_thread(lift_scalar_action(shift, p, p, ppairs), ppairs, 1e-12).passed());

  ScalarAction broken{"broken", [](const Index& j, const Vector& r, const Vector& v) {
                        Vector out = r[0] * v;
                        if (j == Index(4))
                          for (Eigen::Index i = 0; i < out.size(); i += 2) out[i] *= 2.0;
                        return out;
                      }};
  CHECK_THROWS_AS(lift_scalar_action(broken, two, x, pairs), MorphismViolation);
  CHECK_THROWS_AS(lift_scalar_action(scale, Thread(constant_family(poly->poset_ptr(), 1), [](const Index&) {
                                       return vec({1});
                                     }),
                                     x, pairs),
                  FamilyMismatch);
}
