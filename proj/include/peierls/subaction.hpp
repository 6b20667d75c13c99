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

// Subaction verification on a memory graph: V is a subaction when every edge
// u -> v satisfies weight <= V[v] - V[u] + m; it is calibrated when every
// vertex has an incoming edge attaining equality (a contact edge).

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peierls/barrier.hpp"
#include "peierls/common.hpp"
#include "peierls/optimizer.hpp"
#include "peierls/potential.hpp"

namespace peierls {

using VertexValues = std::vector<double>;

struct ContactEdge {
  EdgeId edge = 0;
  double slack = 0.0;  // V[v] - V[u] + m - weight
};

struct SubactionReport {
  VertexValues values;
  bool is_subaction = false;
  double worst_violation = 0.0;  // max(weight - (V[v] - V[u] + m)); <= tol iff subaction
  bool is_calibrated = false;
  std::vector<VertexId> uncalibrated_vertices;
  std::vector<ContactEdge> contact_edges;
  bool supp_in_contact = false;
};

inline SubactionReport verify_subaction(const WeightedMemoryGraph& g, const VertexValues& V,
                                        double tol = kDefaultTolerance) {
  if (V.size() != g.vertex_count()) throw SpecError("subaction values do not cover every vertex");
  const double m = g.m();
  SubactionReport r;
  r.values = V;
  r.worst_violation = kNegInf;
  std::vector<char> contact(g.edge_count(), 0), calibrated(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    const double slack = V[edge.to] - V[edge.from] + m - edge.weight;
    r.worst_violation = std::max(r.worst_violation, -slack);
    if (std::abs(slack) <= tol) {
      contact[e] = 1;
      calibrated[edge.to] = 1;
      r.contact_edges.push_back({e, slack});
    }
  }
  r.is_subaction = r.worst_violation <= tol;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (!calibrated[v]) r.uncalibrated_vertices.push_back(v);
  r.is_calibrated = r.uncalibrated_vertices.empty();
  r.supp_in_contact = true;
  for (EdgeId e : cycle_edges(g, g.critical_cycle())) r.supp_in_contact &= contact[e] != 0;
  return r;
}

// One-step optimality operator: (T V)(v) = max over u -> v of V[u] + weight - m.
inline VertexValues apply_optimality_operator(const WeightedMemoryGraph& g, const VertexValues& V) {
  VertexValues out(g.vertex_count(), kNegInf);
  for (const auto& e : g.edges()) out[e.to] = std::max(out[e.to], V[e.from] + e.weight - g.m());
  return out;
}

struct PreorbitReport {
  std::vector<VertexId> sequence;
  bool tail_in_critical_class = false;
  // The cycle the pre-orbit falls into (in pre-orbit order), if found.
  std::vector<VertexId> tail_cycle;
};

// Walk backwards along contact edges, lowest source first.
inline PreorbitReport calibrated_preorbit(const WeightedMemoryGraph& g, const VertexValues& V,
                                          VertexId start, std::size_t steps,
                                          double tol = kDefaultTolerance) {
  if (start >= g.vertex_count()) throw SpecError("pre-orbit start is not a vertex");
  PreorbitReport r;
  r.sequence.push_back(start);
  std::vector<std::size_t> first_seen(g.vertex_count(), detail::kUnreached);
  first_seen[start] = 0;
  std::optional<std::size_t> loop_from;
  for (std::size_t i = 0; i < steps; ++i) {
    const VertexId v = r.sequence.back();
    std::optional<VertexId> src;
    for (EdgeId e : g.in_edges(v)) {
      const auto& edge = g.edge(e);
      if (std::abs(V[v] - V[edge.from] + g.m() - edge.weight) <= tol &&
          (!src || edge.from < *src))
        src = edge.from;
    }
    if (!src) throw SpecError("values are not calibrated at vertex " + word_to_string(g.vertex(v)));
    r.sequence.push_back(*src);
    if (!loop_from && first_seen[*src] != detail::kUnreached) loop_from = first_seen[*src];
    if (first_seen[*src] == detail::kUnreached) first_seen[*src] = r.sequence.size() - 1;
  }
  if (loop_from) {
    const std::size_t end = [&] {
      for (std::size_t t = *loop_from + 1; t < r.sequence.size(); ++t)
        if (r.sequence[t] == r.sequence[*loop_from]) return t;
      return r.sequence.size();
    }();
    r.tail_cycle.assign(r.sequence.begin() + *loop_from, r.sequence.begin() + end);
    const auto& crit = g.solution().critical_vertex;
    r.tail_in_critical_class = std::all_of(r.tail_cycle.begin(), r.tail_cycle.end(),
                                           [&](VertexId v) { return crit[v] != 0; });
  }
  return r;
}

// Consistent seed over the critical class: component anchors (smallest
// vertex) get the given offset, the rest follows the reduced weights along
// critical edges. Offsets are consumed in ascending anchor order.
inline std::map<VertexId, double> critical_seed(const WeightedMemoryGraph& g,
                                                const std::vector<double>& offsets) {
  const auto& sol = g.solution();
  std::map<VertexId, double> seed;
  std::size_t next = 0;
  for (VertexId anchor = 0; anchor < g.vertex_count(); ++anchor) {
    if (!sol.critical_vertex[anchor] || seed.count(anchor)) continue;
    if (next >= offsets.size()) throw SpecError("not enough offsets for the critical components");
    seed[anchor] = offsets[next++];
    std::vector<VertexId> stack{anchor};
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(u)) {
        if (!sol.critical_edge[e]) continue;
        const auto& edge = g.edge(e);
        if (seed.count(edge.to)) continue;
        seed[edge.to] = seed[u] + edge.weight - sol.m;
        stack.push_back(edge.to);
      }
    }
  }
  return seed;
}

// Number of strongly connected pieces of the critical class.
inline std::size_t critical_component_count(const WeightedMemoryGraph& g) {
  const auto& sol = g.solution();
  std::size_t count = 0;
  std::vector<char> seen(g.vertex_count(), 0);
  for (VertexId a = 0; a < g.vertex_count(); ++a) {
    if (!sol.critical_vertex[a] || seen[a]) continue;
    ++count;
    std::vector<VertexId> stack{a};
    seen[a] = 1;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (EdgeId e : g.out_edges(u)) {
        const VertexId w = g.edge(e).to;
        if (sol.critical_edge[e] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
  }
  return count;
}

// V[v] = max over critical c of seed[c] + longest reduced walk c -> v.
inline VertexValues fixpoint_subaction(const WeightedMemoryGraph& g,
                                       const std::map<VertexId, double>& seed,
                                       double tol = kDefaultTolerance) {
  const auto& sol = g.solution();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (sol.critical_vertex[v] && !seed.count(v))
      throw SpecError("seed misses critical vertex " + word_to_string(g.vertex(v)));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!sol.critical_edge[e]) continue;
    const auto& edge = g.edge(e);
    const double expect = seed.at(edge.from) + edge.weight - sol.m;
    if (std::abs(seed.at(edge.to) - expect) > tol)
      throw SpecError("seed is inconsistent along critical edge " +
                      word_to_string(g.vertex(edge.from)) + " -> " + word_to_string(g.vertex(edge.to)));
  }
  VertexValues V(g.vertex_count(), kNegInf);
  for (const auto& [v, value] : seed) {
    if (v >= g.vertex_count() || !sol.critical_vertex[v])
      throw SpecError("seed assigns a value off the critical class");
    V[v] = value;
  }
  detail::relax_longest(g, sol.m, V, g.vertex_count(), tol);
  std::vector<double> probe = V;
  if (detail::relax_longest(g, sol.m, probe, 1, tol))
    throw PositiveCycleError("positive reduced cycle in fixpoint_subaction");
  return V;
}

struct MinimalityReport {
  bool holds = false;
  double worst_margin = 0.0;  // min over v of (V[v] - V[ybar]) - barrier[v]
  std::vector<double> margins;
};

inline MinimalityReport minimality_check(const WeightedMemoryGraph& g, const VertexValues& V,
                                         const BarrierResult& barrier,
                                         double tol = kDefaultTolerance) {
  if (V.size() != g.vertex_count() || barrier.values.size() != g.vertex_count())
    throw SpecError("minimality_check: size mismatch");
  MinimalityReport r;
  r.worst_margin = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const double margin = (V[v] - V[barrier.ybar]) - barrier.values[v];
    r.margins.push_back(margin);
    r.worst_margin = std::min(r.worst_margin, margin);
  }
  r.holds = r.worst_margin >= -tol;
  return r;
}

struct ConstantComparison {
  bool is_constant_diff = false;
  double constant = 0.0;       // median of V1 - V2
  double max_deviation = 0.0;  // max |V1 - V2 - constant|
};

inline ConstantComparison compare_up_to_constant(const VertexValues& V1, const VertexValues& V2,
                                                 double tol = kDefaultTolerance) {
  if (V1.size() != V2.size() || V1.empty()) throw SpecError("compare: vertex sets differ");
  std::vector<double> diff(V1.size());
  for (std::size_t i = 0; i < V1.size(); ++i) diff[i] = V1[i] - V2[i];
  std::vector<double> sorted = diff;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t h = sorted.size() / 2;
  ConstantComparison r;
  r.constant = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
  for (double d : diff) r.max_deviation = std::max(r.max_deviation, std::abs(d - r.constant));
  r.is_constant_diff = r.max_deviation <= tol;
  return r;
}

// Comparison of a calibrated subaction against the barrier, annotated with
// the uniqueness hypothesis that makes them agree up to a constant.
struct UniquenessReport {
  ConstantComparison comparison;
  bool hypothesis_holds = false;
  std::string note;
};

inline UniquenessReport uniqueness_check(const WeightedMemoryGraph& g, const BarrierResult& barrier,
                                         const VertexValues& V, double tol = kDefaultTolerance) {
  UniquenessReport r;
  r.comparison = compare_up_to_constant(V, barrier.values, tol);
  r.hypothesis_holds = g.solution().critical_class_unique;
  if (r.hypothesis_holds)
    r.note = r.comparison.is_constant_diff
                 ? "critical class is a single cycle; V - barrier is constant"
                 : "critical class is a single cycle but V - barrier is not constant";
  else
    r.note = "uniqueness hypothesis fails: the critical class is not a single cycle (" +
             std::to_string(critical_component_count(g)) +
             " critical component(s)); calibrated subactions need not differ by a constant";
  return r;
}

struct VariationReport {
  std::vector<double> var_n;  // Var_n(V), n = 1..depth
  std::vector<double> bound;  // sum_{j >= n} Var_j(f)
  bool holds = false;
};

// Var_n(V) over vertex pairs agreeing on their first n letters.
inline VariationReport variation_of_subaction(const WeightedMemoryGraph& g, const VertexValues& V,
                                              const FiniteShift& finite, const PotentialSpec& pot,
                                              double tol = kDefaultTolerance) {
  if (V.size() != g.vertex_count()) throw SpecError("variation: size mismatch");
  const std::size_t k = pot.depth();
  VariationReport r;
  r.holds = true;
  std::vector<double> var_f(k + 1, 0.0);
  for (std::size_t j = 1; j < k; ++j) var_f[j] = var_j(pot, finite, j);
  for (std::size_t n = 1; n <= k; ++n) {
    double var = 0.0;
    for (VertexId a = 0; a < g.vertex_count(); ++a)
      for (VertexId b = a + 1; b < g.vertex_count(); ++b) {
        const Word& wa = g.vertex(a);
        const Word& wb = g.vertex(b);
        if (n > wa.size() || !std::equal(wa.begin(), wa.begin() + n, wb.begin())) continue;
        var = std::max(var, std::abs(V[a] - V[b]));
      }
    double bound = 0.0;
    for (std::size_t j = n; j < k; ++j) bound += var_f[j];
    r.var_n.push_back(var);
    r.bound.push_back(bound);
    r.holds &= var <= bound + tol;
  }
  return r;
}

}  // namespace peierls
