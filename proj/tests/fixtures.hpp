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

// Worked examples shared by the unit tests and the acceptance run.

#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "peierls/peierls.hpp"

namespace fixtures {

using peierls::FiniteShift;
using peierls::PotentialSpec;
using peierls::ShiftSpec;

inline ShiftSpec golden_mean() { return ShiftSpec::explicit_finite(2, {{0, 0}, {0, 1}, {1, 0}}); }

inline ShiftSpec renewal(peierls::Letter a, peierls::Letter b) { return ShiftSpec::renewal({a, b}); }

// f = -x_0 with the loop at 0 pinned to 0.
inline PotentialSpec minus_x0() {
  return PotentialSpec(1, peierls::Tail{peierls::TailKind::kLinear, 1.0}, {{peierls::Word{0}, 0.0}});
}

// Depth 2 on the full 2-shift: [0,0] -> 0, [0,1] -> -1, otherwise -x_0.
inline PotentialSpec depth_two() {
  return PotentialSpec(2, peierls::Tail{peierls::TailKind::kLinear, 1.0},
                       {{{0, 0}, 0.0}, {{0, 1}, -1.0}});
}

struct Example {
  std::string name;
  ShiftSpec spec;
  PotentialSpec pot;
  peierls::Letter bound;
};

// Finite worked examples: golden mean, renewal truncations, full 2-shift.
inline std::vector<Example> worked_examples() {
  return {{"golden-mean", golden_mean(), minus_x0(), 1},
          {"renewal-2i-6", renewal(2, 0), minus_x0(), 6},
          {"renewal-2i-12", renewal(2, 0), minus_x0(), 12},
          {"renewal-2i-24", renewal(2, 0), minus_x0(), 24},
          {"renewal-i+1-24", renewal(1, 1), minus_x0(), 24},
          {"full-2-depth-2", ShiftSpec::full(2), depth_two(), 1}};
}

inline peierls::WeightedMemoryGraph optimized_graph(const Example& ex) {
  const auto finite = peierls::transitive_truncation(ex.spec, ex.bound);
  return peierls::optimize(peierls::build_memory_graph(finite, ex.pot));
}

// Two loops of weight 0 joined by edges of weight -3: two critical classes.
inline oracle::Graph two_loops() {
  oracle::Graph g(2);
  g.add(0, 0, 0.0);
  g.add(1, 1, 0.0);
  g.add(0, 1, -3.0);
  g.add(1, 0, -3.0);
  return g;
}

}  // namespace fixtures
