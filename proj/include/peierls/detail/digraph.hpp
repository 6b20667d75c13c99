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

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace peierls::detail {

using Adjacency = std::vector<std::vector<std::size_t>>;

inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

struct Components {
  std::vector<std::size_t> id;  // component of each vertex
  std::size_t count = 0;
};

// Iterative Tarjan. Vertices are visited in ascending index order and
// successors in the order stored, so component ids are reproducible.
inline Components strongly_connected_components(const Adjacency& succ) {
  const std::size_t n = succ.size();
  Components out;
  out.id.assign(n, kUnreached);
  std::vector<std::size_t> index(n, kUnreached), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (vertex, next child)
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnreached) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, child] = frames.back();
      if (child < succ[v].size()) {
        const std::size_t w = succ[v][child++];
        if (index[w] == kUnreached) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          out.id[w] = out.count;
        } while (w != done);
        ++out.count;
      }
    }
  }
  return out;
}

// A component carries an infinite path iff it has an internal edge.
inline std::vector<char> nontrivial_components(const Adjacency& succ, const Components& comp) {
  std::vector<char> nontrivial(comp.count, 0);
  for (std::size_t v = 0; v < succ.size(); ++v)
    for (std::size_t w : succ[v])
      if (comp.id[v] == comp.id[w]) nontrivial[comp.id[v]] = 1;
  return nontrivial;
}

// BFS distances (in edges) from `source`; successors scanned in stored order.
inline std::vector<std::size_t> bfs_distances(const Adjacency& succ, std::size_t source) {
  std::vector<std::size_t> dist(succ.size(), kUnreached);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : succ[v]) {
      if (dist[w] != kUnreached) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

// Shortest path from `from` to `to` using at least one edge (so from == to
// asks for a shortest cycle). Returns the full vertex sequence including both
// endpoints, or nullopt when unreachable. The first discovered parent wins,
// which with ascending successor lists gives the lowest-index tie-break.
inline std::optional<std::vector<std::size_t>> shortest_nonempty_path(const Adjacency& succ,
                                                                     std::size_t from,
                                                                     std::size_t to) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> parent(n, kUnreached);
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> queue;
  for (std::size_t w : succ[from]) {
    if (seen[w]) continue;
    seen[w] = 1;
    parent[w] = from;
    queue.push_back(w);
  }
  while (!queue.empty() && !seen[to]) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : succ[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> path{to};
  std::size_t v = parent[to];
  while (v != from) {
    path.push_back(v);
    v = parent[v];
  }
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

inline Adjacency reversed(const Adjacency& succ) {
  Adjacency pred(succ.size());
  for (std::size_t v = 0; v < succ.size(); ++v)
    for (std::size_t w : succ[v]) pred[w].push_back(v);
  for (auto& p : pred) std::sort(p.begin(), p.end());
  return pred;
}

}  // namespace peierls::detail
