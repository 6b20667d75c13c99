// Copyright 2026 The Peierls Authors
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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "peierls/io.hpp"
#include "peierls/shift_space.hpp"

namespace peierls {
namespace {

ShiftSpec GoldenMean() { return ShiftSpec::explicit_finite(2, {{0, 0}, {0, 1}, {1, 0}}); }
ShiftSpec Renewal2i() { return ShiftSpec::renewal({2, 0}); }

TEST(ShiftSpecTest, ParsesEachKind) {
  const auto r = parse_shift_spec(R"({"kind":"renewal","renewal":{"a":2,"b":0}})");
  EXPECT_EQ(r.kind(), ShiftKind::kRenewal);
  EXPECT_EQ(r.renewal_rule().entry(3), 6);

  const auto full = parse_shift_spec(R"({"kind":"full","alphabet_size":2})");
  int edges = 0;
  for (Letter i = 0; i < 2; ++i)
    for (Letter j = 0; j < 2; ++j) edges += full.admissible(i, j);
  EXPECT_EQ(edges, 4);

  const auto gm =
      parse_shift_spec(R"({"kind":"explicit-finite","alphabet_size":2,"edges":[[0,0],[0,1],[1,0]]})");
  EXPECT_TRUE(gm.admissible(0, 1));
  EXPECT_FALSE(gm.admissible(1, 1));
}

TEST(ShiftSpecTest, RejectsMalformedSpecs) {
  EXPECT_THROW(parse_shift_spec(R"({"kind":"renewal","renewal":{"a":0,"b":0}})"), SpecError);
  EXPECT_THROW(parse_shift_spec(R"({"kind":"full","alphabet_size":0})"), SpecError);
  EXPECT_THROW(parse_shift_spec(R"({"kind":"full","alphabet_size":2,"colour":1})"), SpecError);
  EXPECT_THROW(parse_shift_spec(R"({"kind":"explicit-finite","alphabet_size":2,"edges":[[0,0]]})"),
               SpecError);
  EXPECT_THROW(parse_shift_spec(R"({"kind":"oracle"})"), SpecError);
  EXPECT_THROW(parse_shift_spec(R"({"kind":"full","alphabet_size":2,"lambda":1.5})"), SpecError);
  EXPECT_THROW(parse_shift_spec("not json"), SpecError);
}

TEST(ShiftSpecTest, RoundTripsThroughJson) {
  for (const auto& s : {GoldenMean(), Renewal2i(), ShiftSpec::full(3)}) {
    const auto back = shift_from_json(to_json(s));
    EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
  }
}

TEST(AdmissibleTest, RenewalRule) {
  const auto s = Renewal2i();
  EXPECT_TRUE(admissible(s, 0, 4));
  EXPECT_FALSE(admissible(s, 0, 3));
  EXPECT_TRUE(admissible(s, 5, 4));
  EXPECT_TRUE(admissible(s, 0, 0));
  EXPECT_FALSE(admissible(s, 0, 1));
  EXPECT_FALSE(admissible(s, 4, 2));
}

TEST(AdmissibleTest, AgreesWithDefinitionOnRandomRules) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Letter> ra(1, 4), rb(0, 3);
  for (int t = 0; t < 20; ++t) {
    const Letter a = ra(rng), b = rb(rng);
    const auto s = ShiftSpec::renewal({a, b});
    for (Letter i = 0; i < 30; ++i)
      for (Letter j = 0; j < 30; ++j)
        ASSERT_EQ(s.admissible(i, j), oracle::renewal_edge(a, b, i, j)) << a << " " << b << " " << i << " " << j;
  }
}

TEST(AdmissibleTest, Words) {
  const auto s = Renewal2i();
  const Word good{0, 4, 3, 2, 1, 0};
  const Word bad{0, 3};
  EXPECT_TRUE(admissible_word(s, good));
  EXPECT_FALSE(admissible_word(s, bad));
}

TEST(TruncateTest, RenewalUpToSix) {
  const auto t = truncate(Renewal2i(), 6);
  EXPECT_EQ(t.letters(), (std::vector<Letter>{0, 1, 2, 3, 4, 5, 6}));
  std::vector<LetterPair> expected{{0, 0}, {0, 2}, {0, 4}, {0, 6}};
  for (Letter j = 0; j <= 5; ++j) expected.emplace_back(j + 1, j);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(t.edges(), expected);
}

TEST(TruncateTest, SmallCases) {
  const auto full = truncate(ShiftSpec::full(5), 1);
  EXPECT_EQ(full.size(), 2u);
  EXPECT_EQ(full.edge_count(), 4u);
  const auto gm = truncate(GoldenMean(), 0);
  EXPECT_EQ(gm.size(), 1u);
  EXPECT_TRUE(gm.adjacent(0, 0));
}

TEST(TruncateTest, DropsStrandedLetters) {
  // Letter 7 of d_i = 2i has only the edge 7 -> 6 below 8.
  const auto t = truncate(Renewal2i(), 7);
  EXPECT_EQ(t.max_letter(), 6);
}

TEST(TruncateTest, Nested) {
  for (const auto& spec : {Renewal2i(), ShiftSpec::renewal({3, 1}), ShiftSpec::full(6)}) {
    for (Letter n = 0; n < 14; ++n) {
      const auto a = truncate(spec, n), b = truncate(spec, n + 1);
      for (Letter l : a.letters()) EXPECT_TRUE(b.contains(l));
      for (const auto& [i, j] : a.edges()) EXPECT_TRUE(b.adjacent(i, j));
    }
  }
}

TEST(TransitiveCoreTest, Examples) {
  const auto t = truncate(Renewal2i(), 6);
  const auto core = transitive_core(t, {0});
  EXPECT_EQ(core.size(), 7u);
  EXPECT_TRUE(core.flagged_transitive());

  const FiniteShift loops({0, 1}, {{0, 0}, {1, 1}});
  EXPECT_THROW(transitive_core(loops, {0, 1}), TruncationError);

  const auto gm = truncate(GoldenMean(), 1);
  EXPECT_EQ(transitive_core(gm, {0, 1}).size(), 2u);
}

std::vector<std::vector<char>> Dense(const FiniteShift& f) {
  std::vector<std::vector<char>> adj(f.size(), std::vector<char>(f.size(), 0));
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j) adj[i][j] = f.adjacent(f.letters()[i], f.letters()[j]);
  return adj;
}

TEST(IsTransitiveTest, Examples) {
  EXPECT_TRUE(is_transitive(truncate(GoldenMean(), 1)));
  EXPECT_FALSE(is_transitive(FiniteShift({0, 1}, {{0, 0}, {0, 1}})));
  EXPECT_TRUE(is_transitive(truncate(Renewal2i(), 6)));
}

TEST(IsTransitiveTest, MatchesClosureOracle) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 6;
    std::vector<Letter> letters;
    std::vector<LetterPair> edges;
    for (int i = 0; i < n; ++i) letters.push_back(i);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (coin(rng)) edges.emplace_back(i, j);
    const FiniteShift f(letters, edges);
    EXPECT_EQ(is_transitive(f), oracle::strongly_connected(Dense(f)));
  }
}

TEST(TransitiveTruncationTest, AdvancesPastStrandedBound) {
  const auto t = transitive_truncation(Renewal2i(), 7);
  EXPECT_EQ(t.max_letter(), 8);
  EXPECT_TRUE(oracle::strongly_connected(Dense(t)));
  for (Letter l = 0; l <= 8; ++l) EXPECT_TRUE(t.contains(l));
}

TEST(TransitiveTruncationTest, SaturatesOnFiniteAlphabet) {
  EXPECT_EQ(transitive_truncation(GoldenMean(), 10).max_letter(), 1);
}

TEST(ConnectingWordTest, Examples) {
  const auto gm = truncate(GoldenMean(), 1);
  EXPECT_EQ(connecting_word(gm, 1, 1), (Word{0}));
  const auto r = truncate(Renewal2i(), 6);
  EXPECT_EQ(connecting_word(r, 1, 4), (Word{0}));
  EXPECT_TRUE(connecting_word(r, 0, 4).empty());
  EXPECT_EQ(connection_length(r, 5, 0), 5u);
}

TEST(ConnectingWordTest, ShortestAgainstEnumeration) {
  const auto r = truncate(ShiftSpec::renewal({3, 1}), 9);
  const auto adj = [&](Letter i, Letter j) { return r.adjacent(i, j); };
  for (Letter a : r.letters())
    for (Letter b : r.letters()) {
      const auto w = connecting_word(r, a, b);
      const auto expect = oracle::shortest_connecting_word(r.letters(), adj, a, b, 12);
      ASSERT_TRUE(expect.has_value());
      EXPECT_EQ(w.size(), expect->size()) << a << "->" << b;
      Word full{a};
      full.insert(full.end(), w.begin(), w.end());
      full.push_back(b);
      EXPECT_TRUE(admissible_word(r, full));
    }
}

TEST(ConditionTest, FullShift) {
  const auto s = ShiftSpec::full(2);
  const auto bp = check_bp(s, 10), bi = check_bi(s, 10);
  EXPECT_EQ(bp.status, ConditionStatus::kSatisfied);
  EXPECT_EQ(bp.bound, 0);
  EXPECT_EQ(bi.status, ConditionStatus::kSatisfied);
  EXPECT_EQ(bi.bound, 0);
}

TEST(ConditionTest, ExplicitFiniteUsesMaxLetter) {
  const auto s = ShiftSpec::explicit_finite(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_EQ(check_bp(s, 10).bound, 2);
  EXPECT_EQ(check_bi(s, 10).bound, 2);
}

TEST(ConditionTest, RenewalDoubleEntriesRefuteBp) {
  const auto v = check_bp(Renewal2i(), 100);
  EXPECT_EQ(v.status, ConditionStatus::kRefuted);
  EXPECT_TRUE(v.exact);
  ASSERT_FALSE(v.witnesses.empty());
  for (Letter w : v.witnesses) {
    EXPECT_EQ(w % 2, 1);
    // The only incoming letter is w + 1.
    for (Letter i = 0; i <= 102; ++i) EXPECT_EQ(oracle::renewal_edge(2, 0, i, w), i == w + 1);
  }
  EXPECT_EQ(v.witnesses.back(), 99);
}

TEST(ConditionTest, RenewalConsecutiveEntriesSatisfyBp) {
  const auto v = check_bp(ShiftSpec::renewal({1, 1}), 50);
  ASSERT_EQ(v.status, ConditionStatus::kSatisfied);
  // Every letter has a predecessor within the bound.
  for (Letter j = 0; j <= 50; ++j) {
    bool found = false;
    for (Letter i = 0; i <= *v.bound; ++i) found |= oracle::renewal_edge(1, 1, i, j);
    EXPECT_TRUE(found) << j;
  }
}

TEST(ConditionTest, RenewalRefutesBiLiterally) {
  const auto v = check_bi(Renewal2i(), 100);
  EXPECT_EQ(v.status, ConditionStatus::kRefuted);
  for (Letter w : v.witnesses)
    for (Letter i = 0; i <= 101; ++i) EXPECT_EQ(oracle::renewal_edge(2, 0, w, i), i == w - 1);
}

TEST(ConditionTest, OracleKindIsHorizonBounded) {
  const auto s = ShiftSpec::oracle([](Letter i, Letter j) { return oracle::renewal_edge(2, 0, i, j); });
  const auto v = check_bp(s, 20);
  EXPECT_FALSE(v.exact);
  // Each odd j <= 19 is entered from j + 1 <= 20, so the scan cannot refute.
  EXPECT_EQ(v.status, ConditionStatus::kUndecided);
  EXPECT_EQ(v.bound, 20);
  const auto full = ShiftSpec::oracle([](Letter, Letter) { return true; });
  EXPECT_EQ(check_bp(full, 20).bound, 0);
  const auto none_into_odd = ShiftSpec::oracle([](Letter, Letter j) { return j % 2 == 0; });
  const auto r = check_bp(none_into_odd, 9);
  EXPECT_EQ(r.status, ConditionStatus::kRefuted);
  EXPECT_EQ(r.witnesses, (std::vector<Letter>{1, 3, 5, 7, 9}));
}

}  // namespace
}  // namespace peierls
