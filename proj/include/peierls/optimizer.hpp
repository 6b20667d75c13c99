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

// Memory graph of a finite-memory potential and its maximum mean cycle.
//
// For depth k the vertices are the admissible words of length max(k-1, 1)
// and u -> v carries f(u . last(v)), so the weight of an n-edge walk ending
// at vertex(x) is S_n f(z) for the point z with sigma^n(z) = x. For k = 1 the
// vertices are letters and u -> v carries f on [u]. On a finite transitive
// shift m(f) is then the maximum cycle mean, computed with Karp's algorithm.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peierls/common.hpp"
#include "peierls/detail/digraph.hpp"
#include "peierls/potential.hpp"
#include "peierls/shift_space.hpp"

namespace peierls {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct MemoryEdge {
  VertexId from = 0;
  VertexId to = 0;
  double weight = 0.0;
};

// Result of the maximum mean cycle computation.
struct CycleSolution {
  double m = 0.0;
  // One optimal cycle: smallest vertex first, no repeated closing vertex.
  std::vector<VertexId> cycle;
  // Vertices / edges lying on some cycle of reduced weight zero.
  std::vector<char> critical_vertex;
  std::vector<char> critical_edge;
  // True when the critical edges form exactly one simple cycle.
  bool critical_class_unique = false;
};

class WeightedMemoryGraph {
 public:
  WeightedMemoryGraph() = default;

  WeightedMemoryGraph(std::vector<Word> vertices, std::vector<MemoryEdge> edges, std::size_t depth)
      : vertices_(std::move(vertices)), edges_(std::move(edges)), depth_(depth) {
    if (!std::is_sorted(vertices_.begin(), vertices_.end()) ||
        std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
      throw SpecError("memory graph vertices must be sorted and distinct");
    std::sort(edges_.begin(), edges_.end(), [](const MemoryEdge& a, const MemoryEdge& b) {
      return std::pair(a.from, a.to) < std::pair(b.from, b.to);
    });
    out_.assign(vertices_.size(), {});
    in_.assign(vertices_.size(), {});
    succ_.assign(vertices_.size(), {});
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.from >= vertices_.size() || edge.to >= vertices_.size())
        throw SpecError("memory graph edge references a missing vertex");
      if (e > 0 && edges_[e - 1].from == edge.from && edges_[e - 1].to == edge.to)
        throw SpecError("memory graph has a duplicate edge");
      out_[edge.from].push_back(e);
      in_[edge.to].push_back(e);
      succ_[edge.from].push_back(edge.to);
    }
  }

  // Plain weighted digraph on vertices [0], [1], ..., [n-1].
  static WeightedMemoryGraph from_edges(std::size_t n, std::vector<MemoryEdge> edges) {
    std::vector<Word> vertices;
    for (std::size_t v = 0; v < n; ++v) vertices.push_back(Word{static_cast<Letter>(v)});
    return WeightedMemoryGraph(std::move(vertices), std::move(edges), 1);
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t depth() const { return depth_; }
  const std::vector<Word>& vertices() const { return vertices_; }
  const Word& vertex(VertexId v) const { return vertices_[v]; }
  const std::vector<MemoryEdge>& edges() const { return edges_; }
  const MemoryEdge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }
  const detail::Adjacency& successors() const { return succ_; }

  std::optional<VertexId> find_vertex(const Word& w) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), w);
    if (it == vertices_.end() || *it != w) return std::nullopt;
    return static_cast<VertexId>(it - vertices_.begin());
  }

  std::optional<EdgeId> edge_between(VertexId u, VertexId v) const {
    for (EdgeId e : out_[u])
      if (edges_[e].to == v) return e;
    return std::nullopt;
  }

  bool optimized() const { return solution_.has_value(); }
  const CycleSolution& solution() const {
    if (!solution_) throw Error("memory graph has not been optimized");
    return *solution_;
  }
  double m() const { return solution().m; }
  const std::vector<VertexId>& critical_cycle() const { return solution().cycle; }

  void attach_solution(CycleSolution s) {
    if (s.critical_vertex.size() != vertex_count() || s.critical_edge.size() != edge_count())
      throw Error("cycle solution does not match the graph");
    solution_ = std::move(s);
  }

 private:
  std::vector<Word> vertices_;
  std::vector<MemoryEdge> edges_;
  std::size_t depth_ = 1;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  detail::Adjacency succ_;
  std::optional<CycleSolution> solution_;
};

inline bool is_strongly_connected(const WeightedMemoryGraph& g) {
  if (g.vertex_count() == 0) return false;
  const auto comp = detail::strongly_connected_components(g.successors());
  return comp.count == 1 && detail::nontrivial_components(g.successors(), comp)[0];
}

inline WeightedMemoryGraph build_memory_graph(const FiniteShift& finite, const PotentialSpec& pot) {
  const std::size_t k = pot.depth();
  const std::size_t len = std::max<std::size_t>(k - 1, 1);
  std::vector<Word> vertices = admissible_words(finite, len);
  if (vertices.empty() || finite.edge_count() == 0)
    throw TruncationError("no admissible depth-" + std::to_string(k) + " words");
  std::map<Word, VertexId> index;
  for (VertexId v = 0; v < vertices.size(); ++v) index.emplace(vertices[v], v);

  std::vector<MemoryEdge> edges;
  Word gen;
  for (VertexId u = 0; u < vertices.size(); ++u) {
    const Word& uw = vertices[u];
    const auto last = *finite.index_of(uw.back());
    for (std::size_t ci : finite.successors()[last]) {
      const Letter c = finite.letters()[ci];
      gen = uw;
      gen.push_back(c);
      Word next = k == 1 ? Word{c} : Word(gen.begin() + 1, gen.end());
      auto it = index.find(next);
      if (it == index.end()) continue;
      // k = 1: f on [u]; k = 2: gen is the depth-2 word; k >= 3: gen has length k.
      const double w = k == 1 ? evaluate(pot, uw) : evaluate(pot, gen);
      edges.push_back({u, it->second, w});
    }
  }
  if (edges.empty()) throw TruncationError("memory graph has no edges");
  return WeightedMemoryGraph(std::move(vertices), std::move(edges), k);
}

namespace detail {

// Longest reduced-weight distances from `sources` (value per source) after
// `rounds` Bellman-Ford sweeps. Returns whether the last sweep still improved
// some value by more than `tol`. A `pinned` vertex keeps its value.
inline bool relax_longest(const WeightedMemoryGraph& g, double m, std::vector<double>& dist,
                          std::size_t rounds, double tol,
                          std::optional<VertexId> pinned = std::nullopt) {
  bool improved = false;
  for (std::size_t r = 0; r < rounds; ++r) {
    improved = false;
    bool changed = false;
    for (const auto& e : g.edges()) {
      if (dist[e.from] == kNegInf || e.to == pinned) continue;
      const double cand = dist[e.from] + (e.weight - m);
      if (cand > dist[e.to]) {
        if (cand > dist[e.to] + tol) improved = true;
        dist[e.to] = cand;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return improved;
}

}  // namespace detail

// True when some cycle has weight - m * length > tol.
inline bool has_positive_reduced_cycle(const WeightedMemoryGraph& g, double m,
                                       double tol = kDefaultTolerance) {
  std::vector<double> dist(g.vertex_count(), 0.0);
  detail::relax_longest(g, m, dist, g.vertex_count(), tol);
  std::vector<double> probe = dist;
  return detail::relax_longest(g, m, probe, 1, tol);
}

// Karp's maximum mean cycle plus the critical class and a canonical optimal
// cycle: shortest among optima, then lexicographically smallest.
inline CycleSolution max_mean_cycle(const WeightedMemoryGraph& g, double tol = kDefaultTolerance) {
  const std::size_t n = g.vertex_count();
  if (!is_strongly_connected(g)) throw Error("max_mean_cycle needs a strongly connected graph");

  // d[k][v]: max weight of a k-edge walk from vertex 0 to v.
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
  d[0][0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    for (const auto& e : g.edges())
      if (d[k - 1][e.from] != kNegInf) d[k][e.to] = std::max(d[k][e.to], d[k - 1][e.from] + e.weight);

  double m = kNegInf;
  for (VertexId v = 0; v < n; ++v) {
    if (d[n][v] == kNegInf) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k)
      if (d[k][v] != kNegInf)
        worst = std::min(worst, (d[n][v] - d[k][v]) / static_cast<double>(n - k));
    m = std::max(m, worst);
  }

  // Potential h with h(v) >= h(u) + w - m; tight edges carry every zero cycle.
  std::vector<double> h(n, kNegInf);
  h[0] = 0.0;
  detail::relax_longest(g, m, h, n, tol);
  std::vector<char> tight(g.edge_count(), 0);
  detail::Adjacency tight_succ(n);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    if (std::abs(h[edge.from] + edge.weight - m - h[edge.to]) <= tol) {
      tight[e] = 1;
      tight_succ[edge.from].push_back(edge.to);
    }
  }
  const auto comp = detail::strongly_connected_components(tight_succ);
  const auto nontrivial = detail::nontrivial_components(tight_succ, comp);

  CycleSolution sol;
  sol.critical_vertex.assign(n, 0);
  sol.critical_edge.assign(g.edge_count(), 0);
  detail::Adjacency crit_succ(n);
  std::size_t crit_edges = 0, crit_vertices = 0;
  std::vector<char> crit_comp(comp.count, 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    if (!tight[e] || comp.id[edge.from] != comp.id[edge.to] || !nontrivial[comp.id[edge.from]])
      continue;
    sol.critical_edge[e] = 1;
    sol.critical_vertex[edge.from] = sol.critical_vertex[edge.to] = 1;
    crit_succ[edge.from].push_back(edge.to);
    crit_comp[comp.id[edge.from]] = 1;
    ++crit_edges;
  }
  for (char c : sol.critical_vertex) crit_vertices += c;
  const auto n_crit_comp = std::count(crit_comp.begin(), crit_comp.end(), 1);
  sol.critical_class_unique = n_crit_comp == 1 && crit_edges == crit_vertices;

  // Shortest critical cycle whose minimum vertex is s, for s ascending.
  std::size_t best_len = detail::kUnreached;
  VertexId best_start = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (!sol.critical_vertex[s]) continue;
    detail::Adjacency restricted(n);
    for (VertexId u = s; u < n; ++u)
      for (VertexId w : crit_succ[u])
        if (w >= s) restricted[u].push_back(w);
    auto cyc = detail::shortest_nonempty_path(restricted, s, s);
    if (cyc && cyc->size() - 1 < best_len) {
      best_len = cyc->size() - 1;
      best_start = s;
    }
  }
  if (best_len == detail::kUnreached) throw PositiveCycleError("no critical cycle found");
  {
    // Greedy lexicographic walk of length best_len back to best_start.
    const VertexId s = best_start;
    detail::Adjacency restricted(n);
    for (VertexId u = s; u < n; ++u)
      for (VertexId w : crit_succ[u])
        if (w >= s) restricted[u].push_back(w);
    const auto to_s = detail::bfs_distances(detail::reversed(restricted), s);
    VertexId cur = s;
    sol.cycle.push_back(s);
    for (std::size_t step = 1; step < best_len; ++step) {
      const std::size_t remaining = best_len - step;
      VertexId next = detail::kUnreached;
      for (VertexId w : restricted[cur])
        if (w != s && to_s[w] == remaining && (next == detail::kUnreached || w < next)) next = w;
      sol.cycle.push_back(next);
      cur = next;
    }
  }
  double total = 0.0;
  for (std::size_t t = 0; t < sol.cycle.size(); ++t)
    total += g.edge(*g.edge_between(sol.cycle[t], sol.cycle[(t + 1) % sol.cycle.size()])).weight;
  sol.m = total / static_cast<double>(sol.cycle.size());
  return sol;
}

inline WeightedMemoryGraph optimize(WeightedMemoryGraph g, double tol = kDefaultTolerance) {
  g.attach_solution(max_mean_cycle(g, tol));
  return g;
}

// Uniform measure on the orbit of a periodic point given as a graph cycle.
struct PeriodicMeasure {
  std::vector<VertexId> cycle;
  double mass() const { return 1.0 / static_cast<double>(cycle.size()); }
};

inline std::vector<EdgeId> cycle_edges(const WeightedMemoryGraph& g, std::span<const VertexId> cycle) {
  if (cycle.empty()) throw SpecError("empty cycle");
  std::vector<EdgeId> out;
  for (std::size_t t = 0; t < cycle.size(); ++t) {
    auto e = g.edge_between(cycle[t], cycle[(t + 1) % cycle.size()]);
    if (!e) throw SpecError("vertex sequence is not a directed cycle of the graph");
    out.push_back(*e);
  }
  return out;
}

inline PeriodicMeasure periodic_measure(const WeightedMemoryGraph& g, std::vector<VertexId> cycle) {
  cycle_edges(g, cycle);
  return PeriodicMeasure{std::move(cycle)};
}

// Integral of an edge observable (e.g. the potential itself) against mu.
template <class EdgeFn>
double integrate(const WeightedMemoryGraph& g, const PeriodicMeasure& mu, EdgeFn fn) {
  double sum = 0.0;
  for (EdgeId e : cycle_edges(g, mu.cycle)) sum += fn(g.edge(e));
  return sum * mu.mass();
}

inline double integrate_potential(const WeightedMemoryGraph& g, const PeriodicMeasure& mu) {
  return integrate(g, mu, [](const MemoryEdge& e) { return e.weight; });
}

// S_n f along a walk given as consecutive edges.
inline double birkhoff_sum(const WeightedMemoryGraph& g, std::span<const EdgeId> walk) {
  double sum = 0.0;
  for (std::size_t t = 0; t < walk.size(); ++t) {
    if (walk[t] >= g.edge_count()) throw SpecError("walk references a missing edge");
    if (t > 0 && g.edge(walk[t - 1]).to != g.edge(walk[t]).from)
      throw SpecError("walk is disconnected at step " + std::to_string(t));
    sum += g.edge(walk[t]).weight;
  }
  return sum;
}

inline std::vector<EdgeId> walk_from_vertices(const WeightedMemoryGraph& g,
                                              std::span<const VertexId> vertices) {
  std::vector<EdgeId> out;
  for (std::size_t t = 0; t + 1 < vertices.size(); ++t) {
    auto e = g.edge_between(vertices[t], vertices[t + 1]);
    if (!e) throw SpecError("no edge between consecutive walk vertices");
    out.push_back(*e);
  }
  return out;
}

}  // namespace peierls
