#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "profinite/errors.hpp"
#include "profinite/poset.hpp"

using namespace profinite;

namespace {

const Index I(0), J(1), K(2), L(3);

}  // namespace

TEST_CASE("directedness") {
  ChainPoset nat(0, std::nullopt);
  std::vector<Index> sample = {1, 5, 9};
  CHECK(is_directed(nat, sample));

  FiniteSubsetPoset subsets(0.0, 1.0);
  std::vector<Index> ts = {Index::params({0.5}), Index::params({0.25, 0.75}), Index::params({1.0})};
  CHECK(is_directed(subsets, ts));
  CHECK(subsets.join(ts[0], ts[1]) == Index::params({0.25, 0.5, 0.75}));

  FinitePoset antichain({"J", "K"}, {{true, false}, {false, true}});
  std::vector<Index> both = {0, 1};
  CHECK_THROWS_AS(is_directed(antichain, both), JoinFailure);
}

TEST_CASE("partial order validation") {
  CHECK_THROWS(FinitePoset({"a", "b"}, {{true, true}, {true, true}}));   // not antisymmetric
  CHECK_THROWS(FinitePoset({"a", "b"}, {{false, false}, {false, true}}));  // not reflexive
  CHECK_THROWS(FinitePoset({"a", "b", "c"}, {{true, true, false}, {false, true, true}, {false, false, true}}));
}

TEST_CASE("sections of small posets") {
  ChainPoset nat(0, std::nullopt);
  std::vector<Index> probe;
  for (int n = 0; n < 50; ++n) probe.emplace_back(n);
  CHECK(is_section(nat, Section{7}, std::span<const Index>(probe)));
  CHECK_FALSE(is_section(nat, Section{3, 5}, std::span<const Index>(probe)));
  CHECK_THROWS_AS(is_section(nat, Section{7}), InfinitePoset);
  CHECK_THROWS_AS(is_section(nat, Section{}, std::span<const Index>(probe)), EmptySection);

  auto four = oracle::four_space();
  CHECK(is_section(*four, Section{J, K}));
  CHECK_FALSE(is_section(*four, Section{J}));
  CHECK(is_section(*four, Section{L}));
  CHECK_THROWS_AS(is_section(*four, Section::infinite("all reals")), InfinitePoset);
}

TEST_CASE("section enumeration examples") {
  ChainPoset chain(0, 2);
  auto sections = enumerate_sections(chain);
  REQUIRE(sections.size() == 3);
  CHECK(sections[0] == Section{0});
  CHECK(sections[1] == Section{1});
  CHECK(sections[2] == Section{2});

  // {J} and {K} alone miss the other axis, so only three sections remain.
  auto four = enumerate_sections(*oracle::four_space());
  std::vector<Section> expected = {Section{I}, Section{L}, Section{J, K}};
  CHECK(four == expected);

  FinitePoset single({"*"}, {{true}});
  auto one = enumerate_sections(single);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == Section{0});

  CHECK_THROWS_AS(enumerate_sections(ChainPoset(0, std::nullopt)), InfinitePoset);
  CHECK_THROWS_AS(enumerate_sections(FiniteSubsetPoset(0.0, 1.0)), InfinitePoset);
}

TEST_CASE("enumeration agrees with power-set filtering") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 10;
    const double density = (trial % 7) / 6.0;
    auto rel = oracle::random_order(n, density, rng);
    auto poset = oracle::make_poset(rel);
    std::set<std::uint32_t> got;
    for (const auto& s : enumerate_sections(*poset)) {
      CHECK(is_section(*poset, s));
      got.insert(oracle::mask_of(s));
    }
    auto want = oracle::brute_force_sections(rel);
    CHECK(got == std::set<std::uint32_t>(want.begin(), want.end()));
  }
}

TEST_CASE("chains have exactly the singleton sections") {
  for (int n = 1; n <= 12; ++n) {
    auto poset = oracle::make_poset(oracle::chain_order(n));
    auto sections = enumerate_sections(*poset);
    REQUIRE(static_cast<int>(sections.size()) == n);
    for (const auto& s : sections) CHECK(s.members().size() == 1);
  }
}

TEST_CASE("filter base sets") {
  auto nat = std::make_shared<ChainPoset>(0, std::nullopt);
  std::vector<Index> probe;
  for (int n = 0; n < 20; ++n) probe.emplace_back(n);
  auto b = filter_base_set(nat, Section{3}, std::span<const Index>(probe));
  CHECK(b.contains(5));
  CHECK_FALSE(b.contains(3));
  CHECK_FALSE(b.contains(1));

  auto four = oracle::four_space();
  auto bf = filter_base_set(four, Section{J, K});
  CHECK(bf.contains(L));
  CHECK_FALSE(bf.contains(I));
  CHECK_FALSE(bf.contains(J));

  auto subsets = std::make_shared<FiniteSubsetPoset>(0.0, 1.0);
  std::vector<Index> sub_probe = {Index::params({0.5}), Index::params({0.25, 0.5}), Index::params({})};
  auto bs = filter_base_set(subsets, Section{Index::params({0.5})}, std::span<const Index>(sub_probe));
  CHECK(bs.contains(Index::params({0.25, 0.5})));
  CHECK_FALSE(bs.contains(Index::params({0.5})));

  CHECK_THROWS(filter_base_set(four, Section{J}));
}

TEST_CASE("filter base sets are upward closed") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto rel = oracle::random_order(8, 0.3, rng);
    auto poset = oracle::make_poset(rel);
    for (const auto& s : enumerate_sections(*poset)) {
      FilterBaseSet b(poset, s);
      for (int a = 0; a < 8; ++a)
        for (int c = 0; c < 8; ++c)
          if (a != c && rel[a][c] && b.contains(a)) CHECK(b.contains(c));
    }
  }
}

TEST_CASE("finitely cylindrical witnesses") {
  ChainPoset nat(0, std::nullopt);
  std::vector<Index> probe;
  for (int n = 0; n < 30; ++n) probe.emplace_back(n);
  CHECK(is_finitely_cylindrical_witness(nat, Section{4}, std::span<const Index>(probe)));
  CHECK_FALSE(is_finitely_cylindrical_witness(nat, Section::infinite("antichain"), std::span<const Index>(probe)));

  // A fixed finite time set is comparable to the probes built from its
  // subsets and supersets.
  FiniteSubsetPoset subsets(0.0, 1.0);
  const Index k = Index::params({0.25, 0.5});
  std::vector<Index> sub_probe = {Index::params({}), Index::params({0.25}), Index::params({0.5}), k,
                                  Index::params({0.25, 0.5, 0.75}), Index::params({0.1, 0.25, 0.5, 1.0})};
  CHECK(is_finitely_cylindrical_witness(subsets, Section{k}, std::span<const Index>(sub_probe)));
}

TEST_CASE("leq is a partial order on sampled triples") {
  FiniteSubsetPoset subsets(0.0, 1.0, ParamSet{0.25, 0.5, 0.75, 1.0});
  auto all = *subsets.elements();
  CHECK(all.size() == 16);
  for (const auto& a : all)
    for (const auto& b : all) {
      if (subsets.leq(a, b) && subsets.leq(b, a)) CHECK(a == b);
      for (const auto& c : all)
        if (subsets.leq(a, b) && subsets.leq(b, c)) CHECK(subsets.leq(a, c));
    }
  CHECK_FALSE(subsets.contains(Index::params({0.0})));
  CHECK(subsets.contains(Index::params({0.3})));
}
