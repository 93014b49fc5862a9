#include <doctest.h>

#include <cmath>
#include <numbers>

#include "profinite/errors.hpp"
#include "profinite/gallery.hpp"
#include "profinite/profmetric.hpp"

using namespace profinite;

namespace {

Thread prefix_thread(const FamilyPtr& euclid, Vector top) {
  return Thread(euclid, [top = std::move(top)](const Index& j) { return Vector(top.head(j.integer())); });
}

/// The thread through (3, 4) at level 2: (3) below, zero padding above.
Thread three_four(const FamilyPtr& euclid) {
  Vector v(2);
  v << 3, 4;
  return thread_from_section(euclid, SectionPoint{Section{2}, {{Index(2), v}}});
}

/// Threads whose level-n value is the first n entries of a 0/1 word.
std::array<Thread, 3> word_triple(const FamilyPtr& euclid, int n, std::mt19937_64& rng) {
  auto word = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = double(rng() % 2);
    return prefix_thread(euclid, v);
  };
  return {word(), word(), word()};
}

}  // namespace

TEST_CASE("d_inf examples") {
  auto euclid = euclid_tower(10).family;
  auto m = LevelMetricFamily::euclidean(euclid);
  Thread zero(euclid, [](const Index& j) { return Vector(Vector::Zero(j.integer())); });
  Thread y = three_four(euclid);
  auto sets = prefix_level_sets(1, 10);
  auto r = d_inf(m, zero, y, sets);
  CHECK(r.value == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(r.partial.front() == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  CHECK(r.converged);
  CHECK(d_inf(m, y, y, sets).value == 0.0);

  auto disc = LevelMetricFamily::discrete(euclid);
  Vector ones = Vector::Ones(10);
  CHECK(d_inf(disc, zero, prefix_thread(euclid, ones), sets).value == 0.5);

  auto other = euclid_tower(4).family;
  Thread foreign(other, [](const Index& j) { return Vector(Vector::Zero(j.integer())); });
  CHECK_THROWS_AS(d_inf(m, zero, foreign, sets), FamilyMismatch);
}

TEST_CASE("d_inf is monotone and bounded") {
  auto euclid = euclid_tower(8).family;
  auto m = LevelMetricFamily::euclidean(euclid);
  std::mt19937_64 rng(4);
  auto sets = prefix_level_sets(1, 8);
  for (int s = 0; s < 100; ++s) {
    auto x = prefix_thread(euclid, random_point(8, rng, 5.0));
    auto y = prefix_thread(euclid, random_point(8, rng, 5.0));
    auto r = d_inf(m, x, y, sets);
    for (std::size_t k = 1; k < r.partial.size(); ++k) CHECK(r.partial[k] >= r.partial[k - 1]);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
    // Brute force: the sup of d/(1+d) over the eight levels.
    double sup = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double d = (x(j) - y(j)).norm();
      sup = std::max(sup, d / (1 + d));
    }
    CHECK(r.value == sup);
  }
}

TEST_CASE("d_mu examples") {
  auto euclid = euclid_tower(40).family;
  auto disc = LevelMetricFamily::discrete(euclid);
  Thread zero(euclid, [](const Index& j) { return Vector(Vector::Zero(j.integer())); });
  Thread ones(euclid, [](const Index& j) { return Vector(Vector::Ones(j.integer())); });
  auto mu = inverse_square_measure(1, 40);

  long double series = 0.0L;
  for (long n = 2; n <= 2000000; ++n) series += 1.0L / (static_cast<long double>(n) * n);
  const double expected = static_cast<double>(series) / 2.0;
  CHECK(std::abs(expected - (std::numbers::pi * std::numbers::pi / 6 - 1) / 2) <= 1e-6);

  auto r = d_mu(disc, mu, zero, ones);
  CHECK(r.value <= expected + 1e-12);
  CHECK(expected <= r.value + r.tail_bound + 1e-12);
  CHECK(r.tail_bound == doctest::Approx(mu.tail_mass));
  CHECK(d_mu(disc, mu, ones, ones).value == 0.0);

  IndexMeasure point{{{Index(3), 0.25}}, 0.0};
  auto m = LevelMetricFamily::euclidean(euclid);
  Thread y = three_four(euclid);
  CHECK(d_mu(m, point, zero, y).value == doctest::Approx(0.25 * 5.0 / 6.0).epsilon(1e-15));
  CHECK(d_mu(disc, point, zero, ones).value == 0.125);
}

TEST_CASE("d_mu is bounded by the mass") {
  auto euclid = euclid_tower(12).family;
  auto m = LevelMetricFamily::euclidean(euclid);
  auto mu = inverse_square_measure(1, 12);
  std::mt19937_64 rng(6);
  for (int s = 0; s < 100; ++s) {
    auto x = prefix_thread(euclid, random_point(12, rng, 3.0));
    auto y = prefix_thread(euclid, random_point(12, rng, 3.0));
    auto r = d_mu(m, mu, x, y);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= mu.listed_mass());
    CHECK(r.value + r.tail_bound <= mu.total_mass() + 1e-15);
  }
  CHECK(mu.total_mass() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1).epsilon(1e-14));
}

TEST_CASE("pseudo-metric audits") {
  auto euclid = euclid_tower(10).family;
  auto m = LevelMetricFamily::euclidean(euclid);
  auto sets = prefix_level_sets(1, 10);
  std::mt19937_64 rng(12);
  std::vector<std::array<Thread, 3>> triples;
  for (int s = 0; s < 50; ++s)
    triples.push_back({prefix_thread(euclid, random_point(10, rng, 4.0)),
                       prefix_thread(euclid, random_point(10, rng, 4.0)),
                       prefix_thread(euclid, random_point(10, rng, 4.0))});
  AuditOptions sep;
  for (int j = 1; j <= 10; ++j) sep.separation_levels.emplace_back(j);
  sep.check_positivity = true;
  ThreadDistance dinf = [&](const Thread& a, const Thread& b) { return d_inf(m, a, b, sets).value; };
  auto r = pseudo_metric_audit(dinf, triples, 1e-12, sep);
  CHECK(r.passed());
  CHECK(r.has("triangle"));
  CHECK(r.has("positivity"));

  auto disc = LevelMetricFamily::discrete(euclid);
  auto mu = inverse_square_measure(1, 10);
  std::vector<std::array<Thread, 3>> words;
  for (int s = 0; s < 50; ++s) words.push_back(word_triple(euclid, 10, rng));
  AuditOptions ultra;
  ultra.check_ultrametric = true;
  ThreadDistance dmu = [&](const Thread& a, const Thread& b) { return d_mu(disc, mu, a, b).value; };
  auto u = pseudo_metric_audit(dmu, words, 1e-12, ultra);
  CHECK(u.passed());
  CHECK(u.has("ultrametric"));

  // The Euclidean d_mu is not an ultrametric on generic triples.
  ThreadDistance dmu_euclid = [&](const Thread& a, const Thread& b) { return d_mu(m, mu, a, b).value; };
  CHECK_FALSE(pseudo_metric_audit(dmu_euclid, triples, 1e-12, ultra).passed());

  // A difference in the last coordinate is seen only at the top level.
  Vector a = Vector::Zero(10), b = Vector::Zero(10);
  b[9] = 1.0;
  Thread ta = prefix_thread(euclid, a), tb = prefix_thread(euclid, b);
  CHECK(dinf(ta, tb) == 0.5);
}

TEST_CASE("injection isometry") {
  auto e = euclid_tower(6);
  auto pairs = comparable_pairs(e.family->poset(), e.sample_levels);
  CHECK(check_isometry(LevelMetricFamily::euclidean(e.family), pairs, 20, 1e-12).passed());
  CHECK(check_isometry(LevelMetricFamily::discrete(e.family), pairs, 20, 0.0).passed());

  auto stretched = LevelMetricFamily::custom(e.family, [](const Index& j, const Vector& x, const Vector& y) {
    return double(j.integer()) * (x - y).norm();
  });
  CHECK_FALSE(check_isometry(stretched, pairs, 20, 1e-12).passed());
}
