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

#include "fixtures.hpp"
#include "oracles.hpp"

namespace peierls {
namespace {

constexpr double kTol = 1e-9;

struct CycleOracle {
  double m = 0;
  std::vector<int> canonical;
  std::vector<char> critical_vertex;
  std::size_t optimal_cycles = 0;
};

CycleOracle SolveByEnumeration(const oracle::Graph& g) {
  CycleOracle o;
  o.m = oracle::max_cycle_mean(g);
  o.critical_vertex.assign(g.n, 0);
  for (const auto& c : oracle::simple_cycles(g)) {
    if (oracle::cycle_weight(g, c) / c.size() < o.m - kTol) continue;
    ++o.optimal_cycles;
    for (int v : c) o.critical_vertex[v] = 1;
    if (o.canonical.empty() || c.size() < o.canonical.size() ||
        (c.size() == o.canonical.size() && c < o.canonical))
      o.canonical = c;
  }
  return o;
}

TEST(MemoryGraphTest, GoldenMeanDepthOne) {
  const auto g = build_memory_graph(truncate(fixtures::golden_mean(), 1), fixtures::minus_x0());
  ASSERT_EQ(g.vertex_count(), 2u);
  ASSERT_EQ(g.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(0, 0)).weight, 0.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(0, 1)).weight, 0.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(1, 0)).weight, -1.0);
}

TEST(MemoryGraphTest, FullShiftDepthTwo) {
  const auto g = build_memory_graph(truncate(ShiftSpec::full(2), 1), fixtures::depth_two());
  ASSERT_EQ(g.vertex_count(), 2u);
  ASSERT_EQ(g.edge_count(), 4u);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(0, 0)).weight, 0.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(0, 1)).weight, -1.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(1, 0)).weight, -1.0);
  EXPECT_DOUBLE_EQ(g.edge(*g.edge_between(1, 1)).weight, -1.0);
}

TEST(MemoryGraphTest, RenewalWeightsAreMinusSource) {
  const auto g = build_memory_graph(truncate(fixtures::renewal(2, 0), 6), fixtures::minus_x0());
  ASSERT_EQ(g.vertex_count(), 7u);
  EXPECT_EQ(g.edge_count(), 10u);
  for (const auto& e : g.edges()) {
    EXPECT_TRUE(oracle::renewal_edge(2, 0, g.vertex(e.from)[0], g.vertex(e.to)[0]));
    EXPECT_DOUBLE_EQ(e.weight, -static_cast<double>(g.vertex(e.from)[0]));
  }
}

TEST(MemoryGraphTest, DepthThreeWalkWeightsMatchPotential) {
  std::map<Word, double> table{{{0, 1, 0}, 2.5}, {{1, 0, 0}, -0.5}, {{0, 0, 0}, 0.25}};
  const PotentialSpec pot(3, Tail{}, table);
  const auto finite = truncate(fixtures::golden_mean(), 1);
  const auto g = build_memory_graph(finite, pot);
  // Vertices are admissible words of length 2; each edge reads a depth-3 word.
  EXPECT_EQ(g.vertex_count(), 3u);
  for (const auto& e : g.edges()) {
    Word w = g.vertex(e.from);
    w.push_back(g.vertex(e.to).back());
    EXPECT_DOUBLE_EQ(e.weight, evaluate(pot, w));
  }
}

TEST(MaxMeanCycleTest, SingleLoop) {
  const auto g = optimize(WeightedMemoryGraph::from_edges(1, {{0, 0, -1.0}}));
  EXPECT_DOUBLE_EQ(g.m(), -1.0);
  EXPECT_EQ(g.critical_cycle(), (std::vector<VertexId>{0}));
}

TEST(MaxMeanCycleTest, GoldenMean) {
  const auto g = optimize(build_memory_graph(truncate(fixtures::golden_mean(), 1), fixtures::minus_x0()));
  EXPECT_DOUBLE_EQ(g.m(), 0.0);
  EXPECT_EQ(g.critical_cycle(), (std::vector<VertexId>{0}));
  EXPECT_TRUE(g.solution().critical_class_unique);
  const auto two_cycle = periodic_measure(g, {0, 1});
  EXPECT_DOUBLE_EQ(integrate_potential(g, two_cycle), -0.5);
}

TEST(MaxMeanCycleTest, RejectsGraphsThatAreNotStronglyConnected) {
  const auto g = WeightedMemoryGraph::from_edges(2, {{0, 0, 0.0}, {0, 1, 0.0}});
  EXPECT_THROW(optimize(g), Error);
}

TEST(MaxMeanCycleTest, TwoCriticalClassesAreNotUnique) {
  const auto g = optimize(oracle::to_memory_graph(fixtures::two_loops()));
  EXPECT_DOUBLE_EQ(g.m(), 0.0);
  EXPECT_FALSE(g.solution().critical_class_unique);
  EXPECT_EQ(g.critical_cycle(), (std::vector<VertexId>{0}));
}

TEST(MaxMeanCycleTest, MatchesEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(20260101);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + t % 8;
    const auto og = oracle::random_strongly_connected(rng, n, -10, 10, 0.25 + 0.05 * (t % 5));
    const auto expect = SolveByEnumeration(og);
    const auto g = optimize(oracle::to_memory_graph(og));
    ASSERT_NEAR(g.m(), expect.m, kTol) << "graph " << t;
    std::vector<int> cycle(g.critical_cycle().begin(), g.critical_cycle().end());
    EXPECT_EQ(cycle, expect.canonical) << "graph " << t;
    for (int v = 0; v < n; ++v)
      EXPECT_EQ(g.solution().critical_vertex[v] != 0, expect.critical_vertex[v] != 0) << t;
    EXPECT_EQ(g.solution().critical_class_unique, expect.optimal_cycles == 1) << t;
  }
}

TEST(MaxMeanCycleTest, ReducedCyclesAreNonPositive) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const auto og = oracle::random_real_weights(rng, 2 + t % 7);
    const auto g = optimize(oracle::to_memory_graph(og));
    for (const auto& c : oracle::simple_cycles(og))
      EXPECT_LE(oracle::cycle_weight(og, c) - g.m() * c.size(), kTol);
    const auto edges = cycle_edges(g, g.critical_cycle());
    EXPECT_NEAR(birkhoff_sum(g, edges) - g.m() * edges.size(), 0.0, kTol);
  }
}

TEST(MaxMeanCycleTest, LargeGraphsHaveNoPositiveReducedCycle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto og = oracle::random_real_weights(rng, 40, 0.1);
    const auto g = optimize(oracle::to_memory_graph(og));
    EXPECT_FALSE(has_positive_reduced_cycle(g, g.m()));
    EXPECT_TRUE(has_positive_reduced_cycle(g, g.m() - 1e-3));
  }
}

TEST(MeasureTest, Integrals) {
  const auto loop = optimize(WeightedMemoryGraph::from_edges(1, {{0, 0, 0.0}}));
  EXPECT_DOUBLE_EQ(integrate_potential(loop, periodic_measure(loop, {0})), 0.0);
  const auto g = optimize(build_memory_graph(truncate(fixtures::golden_mean(), 1), fixtures::minus_x0()));
  EXPECT_DOUBLE_EQ(integrate_potential(g, periodic_measure(g, g.critical_cycle())), g.m());
  EXPECT_THROW(periodic_measure(g, {1, 1}), SpecError);
}

TEST(BirkhoffSumTest, Walks) {
  const auto g = optimize(build_memory_graph(truncate(fixtures::golden_mean(), 1), fixtures::minus_x0()));
  EXPECT_DOUBLE_EQ(birkhoff_sum(g, std::vector<EdgeId>{}), 0.0);
  const std::vector<VertexId> there_and_back{0, 1, 0};
  EXPECT_DOUBLE_EQ(birkhoff_sum(g, walk_from_vertices(g, there_and_back)), -1.0);
  const std::vector<EdgeId> broken{*g.edge_between(0, 1), *g.edge_between(0, 0)};
  EXPECT_THROW(birkhoff_sum(g, broken), SpecError);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto og = oracle::random_strongly_connected(rng, 2 + t % 6, -5, 5);
    const auto h = optimize(oracle::to_memory_graph(og));
    const auto lap = cycle_edges(h, h.critical_cycle());
    for (std::size_t laps = 1; laps <= 4; ++laps) {
      std::vector<EdgeId> walk;
      for (std::size_t i = 0; i < laps; ++i) walk.insert(walk.end(), lap.begin(), lap.end());
      EXPECT_NEAR(birkhoff_sum(h, walk), laps * lap.size() * h.m(), kTol);
    }
  }
}

}  // namespace
}  // namespace peierls
