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

// Peierls barrier S_f(ybar, .) on a finite truncation.
//
// ybar is the periodic point of the critical cycle, started at its smallest
// vertex. Every cycle has reduced weight (weight - m) <= 0 and the critical
// cycle has reduced weight 0, so points close to ybar are reached for free by
// lapping the critical cycle: the barrier at vertex v is the longest reduced
// walk from vertex(ybar) to v, the empty walk included. Longest walks are
// computed by Bellman-Ford relaxation; any improvement after |V| sweeps means
// m was wrong.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "peierls/common.hpp"
#include "peierls/optimizer.hpp"
#include "peierls/potential.hpp"
#include "peierls/shift_space.hpp"

namespace peierls {

// Bound |v|(m - alpha) + Var(f) for the vertices starting with `letter`.
// `path_length` counts the transitions from `letter` back to ybar_0.
struct LetterBound {
  Letter letter = 0;
  std::size_t path_length = 0;
  double alpha = 0.0;
  double var_f = 0.0;
  double bound = 0.0;
};

struct UpperBoundReport {
  std::vector<LetterBound> per_letter;
  Letter delta_cutoff = -1;  // letters beyond it have sup(f - m) < -Var(f)
  double delta1 = kNegInf;   // max barrier at the chosen successors x^j, j <= cutoff
  double delta2 = kNegInf;   // max reduced partial sum along ybar's orbit
  double var_f = 0.0;
  double global_bound = 0.0;  // max(delta1, delta2) + Var(f)
};

struct BarrierResult {
  VertexId ybar = 0;
  std::vector<VertexId> ybar_cycle;  // the periodic orbit of ybar
  std::vector<double> values;        // indexed by vertex
  double m = 0.0;
  std::optional<UpperBoundReport> bounds;
};

inline BarrierResult compute_barrier(const WeightedMemoryGraph& g, double tol = kDefaultTolerance) {
  const auto& sol = g.solution();
  BarrierResult out;
  out.ybar = sol.cycle.front();
  out.ybar_cycle = sol.cycle;
  out.m = sol.m;
  out.values.assign(g.vertex_count(), kNegInf);
  out.values[out.ybar] = 0.0;
  // Laps of the critical cycle add rounding noise at ybar; its value is 0.
  detail::relax_longest(g, out.m, out.values, g.vertex_count(), tol, out.ybar);
  std::vector<double> probe = out.values;
  if (detail::relax_longest(g, out.m, probe, 1, tol))
    throw PositiveCycleError("positive reduced cycle while computing the barrier; m = " +
                             format_real(out.m) + " is inconsistent");
  for (double v : out.values)
    if (v == kNegInf) throw Error("barrier undefined: graph is not strongly connected");
  return out;
}

// Entry n: best reduced weight over walks of exactly n edges from vertex(ybar)
// to v (-inf when there is none), n = 0..n_max.
inline std::vector<double> barrier_length_profile(const WeightedMemoryGraph& g, VertexId v,
                                                  std::size_t n_max) {
  const VertexId ybar = g.critical_cycle().front();
  const double m = g.m();
  std::vector<double> cur(g.vertex_count(), kNegInf), next;
  cur[ybar] = 0.0;
  std::vector<double> profile{cur[v]};
  for (std::size_t n = 1; n <= n_max; ++n) {
    next.assign(g.vertex_count(), kNegInf);
    for (const auto& e : g.edges())
      if (cur[e.from] != kNegInf) next[e.to] = std::max(next[e.to], cur[e.from] + e.weight - m);
    cur.swap(next);
    profile.push_back(cur[v]);
  }
  return profile;
}

namespace detail {

inline double min_inf_over(const PotentialSpec& pot, const FiniteShift& finite,
                           const std::vector<Letter>& letters) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Letter l : letters) alpha = std::min(alpha, inf_on_letter(pot, finite, l));
  return alpha;
}

}  // namespace detail

// Periodic-orbit bound: close the walk a -> ... -> ybar_0 into a cycle, whose
// reduced weight is <= 0. The transitions leave the cylinders of a and of the
// interior letters, each worth at least alpha.
inline LetterBound barrier_upper_bound(const WeightedMemoryGraph& g, const FiniteShift& finite,
                                       const PotentialSpec& pot, Letter a) {
  const Letter y0 = g.vertex(g.critical_cycle().front()).front();
  const Word w = connecting_word(finite, a, y0);
  std::vector<Letter> visited{a};
  visited.insert(visited.end(), w.begin(), w.end());
  LetterBound b;
  b.letter = a;
  b.path_length = w.size() + 1;
  b.alpha = detail::min_inf_over(pot, finite, visited);
  b.var_f = total_variation(pot, finite);
  b.bound = static_cast<double>(b.path_length) * (g.m() - b.alpha) + b.var_f;
  return b;
}

inline UpperBoundReport barrier_bounds(const WeightedMemoryGraph& g, const FiniteShift& finite,
                                       const PotentialSpec& pot, const BarrierResult& barrier) {
  UpperBoundReport r;
  r.var_f = total_variation(pot, finite);
  for (Letter a : finite.letters()) r.per_letter.push_back(barrier_upper_bound(g, finite, pot, a));

  r.delta_cutoff = coercivity_cutoff(pot, barrier.m - r.var_f);
  for (Letter j : finite.letters()) {
    if (j > r.delta_cutoff) break;
    // x^j: first vertex that can follow the letter j.
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (finite.adjacent(j, g.vertex(v).front())) {
        r.delta1 = std::max(r.delta1, barrier.values[v]);
        break;
      }
  }
  double partial = 0.0;
  const auto& cyc = barrier.ybar_cycle;
  for (std::size_t t = 0; t < cyc.size(); ++t) {
    partial += g.edge(*g.edge_between(cyc[t], cyc[(t + 1) % cyc.size()])).weight - barrier.m;
    r.delta2 = std::max(r.delta2, partial);
  }
  r.global_bound = std::max(r.delta1, r.delta2) + r.var_f;
  return r;
}

inline BarrierResult compute_barrier_with_bounds(const WeightedMemoryGraph& g,
                                                 const FiniteShift& finite,
                                                 const PotentialSpec& pot,
                                                 double tol = kDefaultTolerance) {
  BarrierResult b = compute_barrier(g, tol);
  b.bounds = barrier_bounds(g, finite, pot, b);
  return b;
}

// Coercivity cutoffs for a letter a.
//
// J: letters beyond J can be cut out of any walk ending in [a] by splicing in
//    a connecting word of at most L_w transitions, because
//    sup (f-m)|[j] < L_w * inf (f-m)|[i] - Var(f) for all retained i.
// N: after enlarging to a truncation holding every letter <= J+1 (bound
//    k2_bound), excursions above I are spliced out with pairwise connecting
//    words of at most L_2 transitions. Optimal walks into [a] then use
//    letters <= N = max(I, k2_bound) only.
struct CutoffReport {
  Letter letter = 0;
  double m = 0.0;
  double var_f = 0.0;
  std::size_t l_w = 0;
  double threshold_j = 0.0;
  Letter j_cutoff = 0;
  Letter k2_bound = 0;
  std::size_t l_2 = 0;
  double threshold_i = 0.0;
  Letter i_cutoff = 0;
  Letter n_cutoff = 0;
};

inline CutoffReport letter_cutoff(const ShiftSpec& spec, const PotentialSpec& pot,
                                  const FiniteShift& finite, Letter a,
                                  double tol = kDefaultTolerance) {
  if (!finite.contains(a)) throw SpecError("letter_cutoff: letter not in the truncation");
  const auto g = optimize(build_memory_graph(finite, pot), tol);
  CutoffReport r;
  r.letter = a;
  r.m = g.m();
  r.var_f = total_variation_bound(pot);

  for (Letter b : finite.letters()) r.l_w = std::max(r.l_w, connection_length(finite, b, a));
  const double inf_k = detail::min_inf_over(pot, finite, finite.letters()) - r.m;
  r.threshold_j = std::min(0.0, static_cast<double>(r.l_w) * inf_k - r.var_f);
  r.j_cutoff = std::max<Letter>(coercivity_cutoff(pot, r.threshold_j + r.m), 0);

  const FiniteShift k2 = transitive_truncation(spec, r.j_cutoff + 1, finite.letters());
  r.k2_bound = k2.max_letter();
  const auto& succ = k2.successors();
  for (std::size_t s = 0; s < k2.size(); ++s) {
    const auto dist = detail::bfs_distances(succ, s);
    for (std::size_t t = 0; t < k2.size(); ++t) {
      // Transitions from s to t, at least one (s == t asks for a cycle).
      std::size_t len = dist[t];
      if (s == t) len = connection_length(k2, k2.letters()[s], k2.letters()[s]);
      r.l_2 = std::max(r.l_2, len);
    }
  }
  const double inf_k2 = detail::min_inf_over(pot, k2, k2.letters()) - r.m;
  r.threshold_i = std::min(0.0, static_cast<double>(r.l_2) * inf_k2 - r.var_f);
  r.i_cutoff = std::max<Letter>(coercivity_cutoff(pot, r.threshold_i + r.m), 0);
  r.n_cutoff = std::max(r.i_cutoff, r.k2_bound);
  return r;
}

}  // namespace peierls
