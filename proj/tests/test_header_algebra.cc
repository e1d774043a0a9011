// Copyright 2026 The sp4 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sp4/header_algebra.h"
#include "support/generators.h"
#include "support/oracle.h"

namespace sp4 {
namespace {

using oracle::SetOfSets;

HeaderType T(const std::string& s) {
  auto t = parse_type(s);
  REQUIRE(t.has_value());
  return *t;
}

SetOfSets prod_denote(const HeaderType& t, const InstanceUniverse& u) {
  auto d = denote(t, u);
  REQUIRE(d.has_value());
  return oracle::from_production(*d, u);
}

TEST_CASE("denote base cases") {
  InstanceUniverse u({"eth", "ipv4"});
  CHECK(prod_denote(ht_zero(), u) == SetOfSets{});
  CHECK(prod_denote(ht_one(), u) == SetOfSets{{}});
  CHECK(prod_denote(ht_instance("eth"), u) == SetOfSets{{"eth"}});
}

TEST_CASE("denote of eth.(ipv4+1)") {
  InstanceUniverse u({"eth", "ipv4"});
  SetOfSets expect = {{"eth", "ipv4"}, {"eth"}};
  CHECK(prod_denote(T("eth.(ipv4+1)"), u) == expect);
}

TEST_CASE("denote union-product distributes over choice") {
  InstanceUniverse u({"a", "b", "c"});
  SetOfSets expect = {{"a", "c"}, {"b", "c"}};
  CHECK(prod_denote(T("(a+b).c"), u) == expect);
}

TEST_CASE("restrict base cases") {
  InstanceUniverse u({"eth", "ipv4", "h"});
  CHECK(is_empty(restrict(ht_one(), "h")));
  CHECK(is_empty(restrict(ht_instance("eth"), "h")));
  CHECK(prod_denote(restrict(T("eth.(ipv4+1)"), "ipv4"), u) ==
        SetOfSets{{"eth", "ipv4"}});
}

TEST_CASE("neg_restrict base cases") {
  InstanceUniverse u({"eth", "ipv4", "h"});
  CHECK(neg_restrict(ht_one(), "h")->kind == TypeKind::kOne);
  CHECK(is_empty(neg_restrict(ht_instance("h"), "h")));
  CHECK(prod_denote(neg_restrict(T("eth.(ipv4+1)"), "ipv4"), u) ==
        SetOfSets{{"eth"}});
}

TEST_CASE("includes base cases and the zero-factor edge") {
  CHECK_FALSE(includes(ht_zero(), "h"));
  CHECK_FALSE(includes(ht_one(), "h"));
  CHECK(includes(T("eth.(ipv4+1)"), "eth"));
  CHECK_FALSE(includes(T("eth.(ipv4+1)"), "ipv4"));
  // A syntactic zero factor annihilates the whole term: nothing is included.
  CHECK_FALSE(includes(T("0.h"), "h"));
}

TEST_CASE("remove base cases") {
  InstanceUniverse u({"eth", "vlan"});
  CHECK(remove(ht_instance("h"), "h")->kind == TypeKind::kOne);
  CHECK(prod_denote(remove(T("eth.vlan"), "vlan"), u) == SetOfSets{{"eth"}});
  CHECK(prod_denote(remove(T("eth+vlan"), "vlan"), u) ==
        SetOfSets{{"eth"}, {}});
}

TEST_CASE("is_empty follows the semantics on concat") {
  CHECK(is_empty(ht_zero()));
  CHECK_FALSE(is_empty(ht_one()));
  CHECK(is_empty(T("0.eth")));
  CHECK(is_empty(T("eth.0")));
  CHECK(is_empty(T("0+0")));
  CHECK_FALSE(is_empty(T("0+eth")));
}

TEST_CASE("entails membership") {
  InstanceUniverse u({"eth", "ipv4"});
  CHECK(entails({}, ht_one(), u));
  CHECK(entails({"eth"}, T("eth.(ipv4+1)"), u));
  CHECK_FALSE(entails({"ipv4"}, T("eth.(ipv4+1)"), u));
  CHECK_FALSE(entails({"eth"}, ht_zero(), u));
  CHECK_FALSE(entails({"nosuch"}, ht_one(), u));
}

TEST_CASE("subtype is denotation subset") {
  InstanceUniverse u({"eth", "ipv4"});
  CHECK(subtype(T("eth.ipv4"), T("eth.(ipv4+1)"), u));
  CHECK_FALSE(subtype(T("eth.(ipv4+1)"), T("eth.ipv4"), u));
  CHECK(subtype(T("eth+0"), T("eth"), u));
  CHECK_FALSE(subtype(ht_one(), ht_zero(), u));
  CHECK(subtype(ht_zero(), ht_one(), u));
}

TEST_CASE("normalize rewrites") {
  CHECK(normalize(T("0.(eth+vlan)"))->kind == TypeKind::kZero);
  CHECK(print_type(normalize(T("(eth.(ipv4+0))+0"))) == "eth.ipv4");
  CHECK(print_type(normalize(T("eth+eth"))) == "eth");
  CHECK(print_type(normalize(T("1.eth.1"))) == "eth");
  CHECK(print_type(normalize(T("(a.b).(c.d)"))) == "a.b.c.d");
}

TEST_CASE("normalize preserves denotation on random terms") {
  InstanceUniverse u = testing::small_universe();
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    HeaderType t = testing::random_type(rng, 6);
    CHECK(oracle::denote(t) == oracle::denote(normalize(t)));
  }
}

TEST_CASE("production denote matches oracle on random terms") {
  InstanceUniverse u = testing::small_universe();
  std::mt19937 rng(11);
  for (int i = 0; i < 2000; ++i) {
    HeaderType t = testing::random_type(rng, 6);
    CHECK(prod_denote(t, u) == oracle::denote(t));
  }
}

TEST_CASE("operator equivalences on random terms") {
  InstanceUniverse u = testing::small_universe();
  std::mt19937 rng(13);
  for (int i = 0; i < 2000; ++i) {
    HeaderType t = testing::random_type(rng, 6);
    SetOfSets d = oracle::denote(t);
    for (const std::string& h : testing::small_universe_names()) {
      CHECK(oracle::denote(restrict(t, h)) == oracle::filter_with(d, h));
      CHECK(oracle::denote(neg_restrict(t, h)) == oracle::filter_without(d, h));
      CHECK(oracle::denote(remove(t, h)) == oracle::erase_from_all(d, h));
      CHECK(includes(t, h) == oracle::includes(d, h));
    }
    CHECK(is_empty(t) == oracle::is_empty(d));
  }
}

TEST_CASE("restrict and neg_restrict partition the denotation") {
  std::mt19937 rng(17);
  for (int i = 0; i < 1000; ++i) {
    HeaderType t = testing::random_type(rng, 6);
    SetOfSets d = oracle::denote(t);
    for (const std::string& h : testing::small_universe_names()) {
      SetOfSets with = oracle::denote(restrict(t, h));
      SetOfSets without = oracle::denote(neg_restrict(t, h));
      SetOfSets unioned = with;
      unioned.insert(without.begin(), without.end());
      CHECK(unioned == d);
      for (const auto& a : with) CHECK_FALSE(without.count(a));
    }
  }
}

TEST_CASE("restrict_all filters by superset") {
  InstanceUniverse u({"eth", "vlan", "ipv4"});
  CHECK(prod_denote(restrict_all(T("eth.(vlan+1).(ipv4+1)"),
                                 {"vlan", "ipv4"}),
                    u) == SetOfSets{{"eth", "vlan", "ipv4"}});
  HeaderType t = T("eth.(vlan+1)");
  CHECK(structurally_equal(restrict_all(t, {}), t));
  CHECK(is_empty(restrict_all(ht_one(), {"eth"})));
}

TEST_CASE("subtype monotonicity of the operators") {
  InstanceUniverse u = testing::small_universe();
  std::mt19937 rng(19);
  int checked = 0;
  for (int i = 0; i < 4000 && checked < 500; ++i) {
    HeaderType t1 = testing::random_type(rng, 5);
    HeaderType t2 = testing::random_type(rng, 5);
    if (!subtype(t1, t2, u)) continue;
    ++checked;
    for (const std::string& h : testing::small_universe_names()) {
      CHECK(subtype(restrict(t1, h), restrict(t2, h), u));
      CHECK(subtype(neg_restrict(t1, h), neg_restrict(t2, h), u));
      CHECK(subtype(remove(t1, h), remove(t2, h), u));
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("denotation cap yields no answer rather than a wrong one") {
  InstanceUniverse u = testing::small_universe();
  HeaderType t = T("(h0+1).(h1+1).(h2+1).(h3+1).(h4+1)");
  CHECK_FALSE(denote(t, u, 8).has_value());
  auto full = denote(t, u, 32);
  REQUIRE(full.has_value());
  CHECK(full->alts.size() == 32);
}

TEST_CASE("type notation round-trips") {
  std::mt19937 rng(23);
  for (int i = 0; i < 500; ++i) {
    HeaderType t = testing::random_type(rng, 5);
    auto back = parse_type(print_type(t));
    REQUIRE(back.has_value());
    CHECK(structurally_equal(t, *back));
  }
  CHECK_FALSE(parse_type("eth+").has_value());
  CHECK_FALSE(parse_type("(eth").has_value());
  CHECK_FALSE(parse_type("").has_value());
}

}  // namespace
}  // namespace sp4
