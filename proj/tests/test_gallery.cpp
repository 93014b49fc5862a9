#include <doctest.h>

#include <cmath>
#include <set>

#include "profinite/errors.hpp"
#include "profinite/gallery.hpp"

using namespace profinite;

TEST_CASE("every catalog family passes its audit") {
  for (const auto& entry : gallery_catalog()) {
    CAPTURE(entry.name);
    auto g = make_gallery(entry.name);
    auto r = audit_gallery(g, {.points = 20});
    for (const auto& c : r.checks()) {
      CAPTURE(c.name);
      CAPTURE(c.residual);
      CHECK(c.passed());
    }
  }
}

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Piecewise-linear interpolation through (0, 0) and the knots, flat after the last knot.
double interp(const std::vector<double>& t, const std::vector<double>& v, double s) {
  double t0 = 0.0, v0 = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (s <= t[k]) return v0 + (v[k] - v0) * (s - t0) / (t[k] - t0);
    t0 = t[k];
    v0 = v[k];
  }
  return v0;
}

ParamSet random_times(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::set<double> s;
  while (static_cast<int>(s.size()) < count) s.insert(1.0 - u(rng));  // (0, 1]
  return ParamSet(s.begin(), s.end());
}

}  // namespace

TEST_CASE("polynomial tower") {
  auto g = poly_tower(4);
  CHECK(g.family->proj(1, 2)(vec({1, 2, 3})) == vec({1, 2}));
  CHECK(g.family->proj(2, 4)(g.family->inj(2, 4)(vec({1, 2, 3}))) == vec({1, 2, 3}));
  Vector e3 = g.threads.at("exp_series")(3);
  CHECK(e3[0] == 1.0);
  CHECK(e3[1] == 1.0);
  CHECK(e3[2] == 0.5);
  CHECK(e3[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(jet_tower(4).name == "jet_tower");
  CHECK_THROWS_AS(poly_tower(-1), std::invalid_argument);
}

TEST_CASE("matrix tower") {
  auto g = matrix_tower(4);
  const auto& lap = g.threads.at("laplacian_exp");
  Vector two = lap(2);
  CHECK(two == vec({std::exp(1.0), 0, 0, std::exp(4.0)}));
  std::vector<std::pair<Index, Index>> pairs;
  for (int n = 1; n < 4; ++n) pairs.emplace_back(n, n + 1);
  CHECK(check_thread(lap, pairs, 0.0).residual("thread_consistency") == 0.0);

  auto a = diagonal_thread(g.family, [](int k) { return double(k); });
  auto b = diagonal_thread(g.family, [](int k) { return 1.0 + k; });
  auto ab = lift_binary(matrix_product(), a, b, pairs, 0.0);
  Vector m3 = ab(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) CHECK(m3[3 * r + c] == (r == c ? (r + 1.0) * (r + 2.0) : 0.0));

  Matrix block = Matrix::Random(3, 3);
  Vector flat = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Matrix(block.transpose()).data());
  Vector corner = g.family->proj(2, 3)(flat);
  CHECK(corner == vec({block(0, 0), block(0, 1), block(1, 0), block(1, 1)}));
}

TEST_CASE("cross family and its reflection") {
  auto g = cross_family();
  auto swap = cross_swap(g.family);
  const Index J(1), K(2), L(3);
  CHECK(swap.level(L)(vec({1, 2})) == vec({2, 1}));
  CHECK(swap.index_map(J) == K);
  CHECK(swap.index_map(K) == J);
  CHECK(swap.level(J).codomain_dim() == g.family->dim(K));
  CHECK(is_profinite_diffeomorphism(swap, swap, g.sample_levels, 10, 0.0));
  auto pairs = comparable_pairs(g.family->poset(), g.sample_levels);
  CHECK(check_commuting_squares(swap, pairs, 10, 0.0).passed());
}

TEST_CASE("wiener family") {
  auto g = wiener_family(8);
  const auto& f = g.family;
  CHECK(wiener_pairing({0.5}, vec({2.0}), [](double) { return vec({3.0}); }) == 6.0);
  CHECK_THROWS_AS(wiener_pairing({1.5}, vec({2.0}), [](double) { return vec({3.0}); }), TimeOutOfRange);
  const Index half = Index::params({0.5}), quarter_half = Index::params({0.25, 0.5});
  CHECK(f->inj(half, quarter_half)(vec({2.0})) == vec({1.0, 2.0}));
  CHECK(f->proj(half, quarter_half)(f->inj(half, quarter_half)(vec({2.0}))) == vec({2.0}));
  CHECK(f->dim(quarter_half) == 2);
  CHECK(wiener_family(4, 3).family->dim(quarter_half) == 6);
  CHECK_THROWS_AS(pl_interpolate({0.5}, vec({1.0}), {0.0}, 1), TimeOutOfRange);
}

TEST_CASE("wiener interpolation matches a hand interpolator") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int s = 0; s < 200; ++s) {
    auto knots = random_times(rng, 1 + int(rng() % 4));
    auto at = random_times(rng, 1 + int(rng() % 5));
    Vector values(knots.size());
    for (auto& v : values) v = n(rng);
    Vector out = pl_interpolate(knots, values, at, 1);
    std::vector<double> kt(knots.begin(), knots.end()), kv(values.begin(), values.end());
    for (std::size_t k = 0; k < at.size(); ++k) CHECK(std::abs(out[k] - interp(kt, kv, at[k])) <= 1e-12);
  }
}

TEST_CASE("wiener injections compose") {
  auto g = wiener_family(8, 2);
  const auto& f = g.family;
  std::mt19937_64 rng(41);
  for (int s = 0; s < 200; ++s) {
    ParamSet m = random_times(rng, 3 + int(rng() % 6));
    ParamSet l, k;
    for (double t : m)
      if (rng() % 3 != 0) l.push_back(t);
    if (l.empty()) l.push_back(m.front());
    for (double t : l)
      if (rng() % 2 == 0) k.push_back(t);
    if (k.empty()) k.push_back(l.back());
    const Index K = Index::params(k), L = Index::params(l), M = Index::params(m);
    Vector x = random_point(f->dim(K), rng);
    CHECK(max_abs_diff(f->inj(K, M)(x), f->inj(L, M)(f->inj(K, L)(x))) <= 1e-12);
    CHECK(max_abs_diff(f->proj(K, M)(f->inj(K, M)(x)), x) <= 1e-12);
  }
}

TEST_CASE("wiener sampler marginals") {
  auto g = wiener_family(4);
  WienerSampler sampler(g.family, 2024);
  const ParamSet times = {0.25, 0.5, 1.0};
  const int n = 100000;
  Vector sum = Vector::Zero(3), sq = Vector::Zero(3);
  for (int s = 0; s < n; ++s) {
    Vector x = sampler.sample_at(times);
    sum += x;
    sq += x.cwiseProduct(x);
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = sum[k] / n, var = sq[k] / n - mean * mean;
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(times[k]) / std::sqrt(double(n)));
    CHECK(std::abs(var - times[k]) <= 0.05 * times[k]);
  }
  WienerSampler a(g.family, 7), b(g.family, 7);
  CHECK(a.sample().values == b.sample().values);
  CHECK(a.sample().section == Section{Index::params(dyadic_pool(4))});
}

TEST_CASE("symplectic towers") {
  auto even = symplectic_even_tower(3);
  Matrix w2 = even.forms.at("omega").level(2)(vec({0.0, 0.0})).as_matrix();
  CHECK(w2 == (Matrix(2, 2) << 0, 1, -1, 0).finished());
  CHECK(numerical_rank(w2) == 2);
  Matrix w6 = even.forms.at("omega").level(6)(Vector::Zero(6)).as_matrix();
  CHECK(numerical_rank(w6) == 6);
  auto odd = symplectic_odd_tower(2);
  CHECK(numerical_rank(odd.forms.at("omega").level(3)(Vector::Zero(3)).as_matrix()) == 2);
  CHECK(momentum_verify(even.forms.at("omega"), torus_action(even.family), torus_momentum(even.family),
                        vec({1.0, 0.5}), 4, 10, 1e-6)
            .passed());
}

TEST_CASE("catalog") {
  for (const auto& e : gallery_catalog()) CHECK(make_gallery(e.name).name == e.name);
  CHECK_THROWS_AS(make_gallery("klein_bottle"), std::invalid_argument);
  CHECK(make_gallery("euclid_tower", 3).params.at("max_level") == 3);
}
