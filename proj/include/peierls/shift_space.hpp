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

// Countable-alphabet Markov shifts, their finite truncations, and the
// bounded-entry (BP) / bounded-exit (BI) conditions.

#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peierls/common.hpp"
#include "peierls/detail/digraph.hpp"

namespace peierls {

enum class ShiftKind { kExplicitFinite, kFull, kRenewal, kOracle };

inline const char* to_string(ShiftKind k) {
  switch (k) {
    case ShiftKind::kExplicitFinite: return "explicit-finite";
    case ShiftKind::kFull: return "full";
    case ShiftKind::kRenewal: return "renewal";
    case ShiftKind::kOracle: return "oracle";
  }
  return "?";
}

using LetterPair = std::pair<Letter, Letter>;

// Entry letters d_i = a*i + b for i >= 1.
struct RenewalRule {
  std::int64_t a = 1;
  std::int64_t b = 0;

  Letter entry(std::int64_t i) const { return a * i + b; }
  bool is_entry(Letter j) const { return j >= a + b && (j - b) % a == 0; }
};

// Incidence structure of a one-sided Markov shift over {0, 1, 2, ...}.
// Immutable after construction; the factories validate their arguments and
// throw SpecError.
class ShiftSpec {
 public:
  using Predicate = std::function<bool(Letter, Letter)>;

  static ShiftSpec full(Letter alphabet_size, double lambda = 0.5) {
    if (alphabet_size < 1) throw SpecError("full shift needs alphabet_size >= 1");
    ShiftSpec s(ShiftKind::kFull, lambda);
    s.alphabet_size_ = alphabet_size;
    return s;
  }

  static ShiftSpec explicit_finite(Letter alphabet_size, std::vector<LetterPair> edges,
                                   double lambda = 0.5) {
    if (alphabet_size < 1) throw SpecError("explicit-finite shift needs alphabet_size >= 1");
    ShiftSpec s(ShiftKind::kExplicitFinite, lambda);
    s.alphabet_size_ = alphabet_size;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<char> has_out(alphabet_size, 0), has_in(alphabet_size, 0);
    for (const auto& [i, j] : edges) {
      if (i < 0 || j < 0 || i >= alphabet_size || j >= alphabet_size)
        throw SpecError("edge [" + std::to_string(i) + "," + std::to_string(j) +
                        "] outside alphabet of size " + std::to_string(alphabet_size));
      has_out[i] = 1;
      has_in[j] = 1;
    }
    for (Letter l = 0; l < alphabet_size; ++l)
      if (!has_out[l] || !has_in[l])
        throw SpecError("stranded letter " + std::to_string(l) + " (no " +
                        (has_out[l] ? "incoming" : "outgoing") + " edge)");
    s.edges_ = std::move(edges);
    return s;
  }

  static ShiftSpec renewal(RenewalRule rule, double lambda = 0.5) {
    if (rule.a < 1 || rule.b < 0)
      throw SpecError("renewal rule d_i = a*i + b needs a >= 1 and b >= 0 (strictly increasing)");
    ShiftSpec s(ShiftKind::kRenewal, lambda);
    s.rule_ = rule;
    return s;
  }

  // Library-only: the predicate must be total on the naturals.
  static ShiftSpec oracle(Predicate admissible, double lambda = 0.5) {
    if (!admissible) throw SpecError("oracle shift needs a predicate");
    ShiftSpec s(ShiftKind::kOracle, lambda);
    s.oracle_ = std::move(admissible);
    return s;
  }

  ShiftKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  bool finite_alphabet() const { return alphabet_size_.has_value(); }
  // nullopt for the unbounded alphabets (renewal, oracle).
  std::optional<Letter> alphabet_size() const { return alphabet_size_; }
  const std::vector<LetterPair>& edges() const { return edges_; }
  const RenewalRule& renewal_rule() const { return rule_; }

  bool in_alphabet(Letter l) const { return l >= 0 && (!alphabet_size_ || l < *alphabet_size_); }

  bool admissible(Letter i, Letter j) const {
    if (!in_alphabet(i) || !in_alphabet(j)) return false;
    switch (kind_) {
      case ShiftKind::kFull: return true;
      case ShiftKind::kExplicitFinite:
        return std::binary_search(edges_.begin(), edges_.end(), LetterPair{i, j});
      case ShiftKind::kRenewal:
        return (i == 0 && j == 0) || i == j + 1 || (i == 0 && rule_.is_entry(j));
      case ShiftKind::kOracle: return oracle_(i, j);
    }
    return false;
  }

 private:
  ShiftSpec(ShiftKind kind, double lambda) : kind_(kind), lambda_(lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw SpecError("lambda must lie strictly in (0,1)");
  }

  ShiftKind kind_;
  double lambda_;
  std::optional<Letter> alphabet_size_;
  std::vector<LetterPair> edges_;
  RenewalRule rule_;
  Predicate oracle_;
};

inline bool admissible(const ShiftSpec& shift, Letter i, Letter j) { return shift.admissible(i, j); }

inline bool admissible_word(const ShiftSpec& shift, std::span<const Letter> word) {
  for (std::size_t t = 0; t + 1 < word.size(); ++t)
    if (!shift.admissible(word[t], word[t + 1])) return false;
  return word.empty() || shift.in_alphabet(word.front());
}

// A finite-alphabet subshift Sigma_k: the induced digraph on `letters`.
class FiniteShift {
 public:
  // `letters` need not be sorted; edges outside `letters` are rejected.
  FiniteShift(std::vector<Letter> letters, const std::vector<LetterPair>& edges,
              std::shared_ptr<const ShiftSpec> parent = nullptr,
              std::optional<Letter> bound = std::nullopt)
      : letters_(std::move(letters)), parent_(std::move(parent)), bound_(bound) {
    std::sort(letters_.begin(), letters_.end());
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
    const std::size_t n = letters_.size();
    adjacency_.assign(n * n, 0);
    succ_.assign(n, {});
    for (const auto& [i, j] : edges) {
      auto a = index_of(i), b = index_of(j);
      if (!a || !b)
        throw SpecError("edge [" + std::to_string(i) + "," + std::to_string(j) +
                        "] leaves the letter set");
      if (adjacency_[*a * n + *b]) continue;
      if (parent_ && !parent_->admissible(i, j))
        throw SpecError("edge not admissible in parent shift");
      adjacency_[*a * n + *b] = 1;
      succ_[*a].push_back(*b);
    }
    for (auto& s : succ_) std::sort(s.begin(), s.end());
    pred_ = detail::reversed(succ_);
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter max_letter() const { return letters_.back(); }

  std::optional<std::size_t> index_of(Letter l) const {
    auto it = std::lower_bound(letters_.begin(), letters_.end(), l);
    if (it == letters_.end() || *it != l) return std::nullopt;
    return static_cast<std::size_t>(it - letters_.begin());
  }
  bool contains(Letter l) const { return index_of(l).has_value(); }

  bool adjacent(Letter i, Letter j) const {
    auto a = index_of(i), b = index_of(j);
    return a && b && adjacency_[*a * size() + *b];
  }

  // Successor / predecessor lists by index, ascending.
  const detail::Adjacency& successors() const { return succ_; }
  const detail::Adjacency& predecessors() const { return pred_; }

  std::vector<LetterPair> edges() const {
    std::vector<LetterPair> out;
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b : succ_[a]) out.emplace_back(letters_[a], letters_[b]);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (const auto& s : succ_) c += s.size();
    return c;
  }

  const std::shared_ptr<const ShiftSpec>& parent() const { return parent_; }
  // Truncation bound n_k this shift was produced from, if any.
  std::optional<Letter> bound() const { return bound_; }
  bool flagged_transitive() const { return transitive_; }

 private:
  friend FiniteShift transitive_core(const FiniteShift&, const std::vector<Letter>&);

  std::vector<Letter> letters_;
  std::vector<char> adjacency_;
  detail::Adjacency succ_;
  detail::Adjacency pred_;
  std::shared_ptr<const ShiftSpec> parent_;
  std::optional<Letter> bound_;
  bool transitive_ = false;
};

inline bool admissible_word(const FiniteShift& shift, std::span<const Letter> word) {
  if (word.empty()) return true;
  if (!shift.contains(word.front())) return false;
  for (std::size_t t = 0; t + 1 < word.size(); ++t)
    if (!shift.adjacent(word[t], word[t + 1])) return false;
  return true;
}

// Induced subshift on {0..max_letter}; letters without an incoming or an
// outgoing edge inside the set are dropped repeatedly.
inline FiniteShift truncate(const ShiftSpec& shift, Letter max_letter) {
  if (max_letter < 0) throw SpecError("truncation bound must be >= 0");
  Letter top = max_letter;
  if (auto n = shift.alphabet_size()) top = std::min(top, *n - 1);
  const std::size_t n = static_cast<std::size_t>(top + 1);

  std::vector<LetterPair> edges;
  switch (shift.kind()) {
    case ShiftKind::kRenewal:
      edges.emplace_back(0, 0);
      for (Letter j = 1; j <= top; ++j) {
        if (shift.renewal_rule().is_entry(j)) edges.emplace_back(0, j);
        edges.emplace_back(j, j - 1);
      }
      break;
    case ShiftKind::kExplicitFinite:
      for (const auto& e : shift.edges())
        if (e.first <= top && e.second <= top) edges.push_back(e);
      break;
    default:
      for (Letter i = 0; i <= top; ++i)
        for (Letter j = 0; j <= top; ++j)
          if (shift.admissible(i, j)) edges.emplace_back(i, j);
  }

  std::vector<char> alive(n, 1);
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<char> out(n, 0), in(n, 0);
    for (const auto& [i, j] : edges) {
      if (!alive[i] || !alive[j]) continue;
      out[i] = 1;
      in[j] = 1;
    }
    for (std::size_t l = 0; l < n; ++l)
      if (alive[l] && (!out[l] || !in[l])) alive[l] = 0, changed = true;
  }
  std::vector<Letter> letters;
  for (std::size_t l = 0; l < n; ++l)
    if (alive[l]) letters.push_back(static_cast<Letter>(l));
  if (letters.empty())
    throw TruncationError("truncation at " + std::to_string(max_letter) +
                          " contains no admissible loop or cycle");
  std::erase_if(edges, [&](const LetterPair& e) { return !alive[e.first] || !alive[e.second]; });
  return FiniteShift(std::move(letters), edges, std::make_shared<const ShiftSpec>(shift), max_letter);
}

inline bool is_transitive(const FiniteShift& finite) {
  if (finite.empty()) return false;
  const auto comp = detail::strongly_connected_components(finite.successors());
  return comp.count == 1 && detail::nontrivial_components(finite.successors(), comp)[0];
}

// The strongly connected piece of `finite` holding every required letter.
inline FiniteShift transitive_core(const FiniteShift& finite, const std::vector<Letter>& required) {
  if (required.empty()) throw SpecError("transitive_core needs at least one required letter");
  std::vector<std::size_t> req;
  for (Letter l : required) {
    auto i = finite.index_of(l);
    if (!i) throw TruncationError("required letter " + std::to_string(l) + " not in truncation");
    req.push_back(*i);
  }
  const auto comp = detail::strongly_connected_components(finite.successors());
  const auto nontrivial = detail::nontrivial_components(finite.successors(), comp);
  const std::size_t target = comp.id[req.front()];
  std::vector<Letter> separated;
  for (std::size_t i : req)
    if (comp.id[i] != target) separated.push_back(finite.letters()[i]);
  if (!separated.empty() || !nontrivial[target]) {
    std::string msg = "required letters are not in one strongly connected component: letter " +
                      std::to_string(required.front()) + " is separated from {";
    for (std::size_t t = 0; t < separated.size(); ++t)
      msg += (t ? "," : "") + std::to_string(separated[t]);
    msg += nontrivial[target] ? "}" : "} (and lies on no cycle)";
    throw TruncationError(msg + "; retry with a larger truncation");
  }
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < finite.size(); ++i)
    if (comp.id[i] == target) letters.push_back(finite.letters()[i]);
  std::vector<LetterPair> edges;
  for (const auto& e : finite.edges())
    if (comp.id[*finite.index_of(e.first)] == target && comp.id[*finite.index_of(e.second)] == target)
      edges.push_back(e);
  FiniteShift core(std::move(letters), edges, finite.parent(), finite.bound());
  core.transitive_ = true;
  return core;
}

inline constexpr Letter kMaxAutoAdvance = 1024;

// Smallest truncation bound n >= min_bound whose transitive core holds every
// letter <= n of the alphabet plus `extra`. For a finite alphabet the bound
// saturates at the last letter.
inline FiniteShift transitive_truncation(const ShiftSpec& shift, Letter min_bound,
                                         const std::vector<Letter>& extra = {},
                                         Letter max_advance = kMaxAutoAdvance) {
  Letter last = min_bound + max_advance;
  if (auto n = shift.alphabet_size()) {
    min_bound = std::min(min_bound, *n - 1);
    last = *n - 1;
  }
  std::string why;
  for (Letter bound = min_bound; bound <= last; ++bound) {
    std::vector<Letter> required;
    for (Letter l = 0; l <= bound; ++l) required.push_back(l);
    for (Letter l : extra)
      if (l > bound) required.push_back(l);
    try {
      return transitive_core(truncate(shift, bound), required);
    } catch (const TruncationError& e) {
      why = e.what();
    }
  }
  throw TruncationError("no transitive truncation with bound in [" + std::to_string(min_bound) +
                        ", " + std::to_string(last) + "]: " + why);
}

// Shortest w with a.w.b admissible (w may be empty). BFS, lowest letter first.
inline Word connecting_word(const FiniteShift& finite, Letter a, Letter b) {
  auto ia = finite.index_of(a), ib = finite.index_of(b);
  if (!ia || !ib) throw SpecError("connecting_word: letter outside the truncation");
  auto path = detail::shortest_nonempty_path(finite.successors(), *ia, *ib);
  if (!path)
    throw TruncationError("no admissible word connects " + std::to_string(a) + " to " +
                          std::to_string(b));
  Word w;
  for (std::size_t t = 1; t + 1 < path->size(); ++t) w.push_back(finite.letters()[(*path)[t]]);
  return w;
}

// Number of transitions on the shortest a -> b connection: |w| + 1.
inline std::size_t connection_length(const FiniteShift& finite, Letter a, Letter b) {
  return connecting_word(finite, a, b).size() + 1;
}

// ---------------------------------------------------------------------------
// BP / BI

enum class ConditionStatus { kSatisfied, kRefuted, kUndecided };

inline const char* to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::kSatisfied: return "SATISFIED";
    case ConditionStatus::kRefuted: return "REFUTED";
    case ConditionStatus::kUndecided: return "UNDECIDED";
  }
  return "?";
}

struct ConditionVerdict {
  ConditionStatus status = ConditionStatus::kUndecided;
  std::optional<Letter> bound;   // N for SATISFIED (or best candidate when UNDECIDED)
  std::vector<Letter> witnesses; // letters without a bounded neighbour (REFUTED)
  bool exact = false;            // false when only checked up to the horizon
  std::string evidence;
};

namespace detail {

// Shared horizon scan for the oracle kind. `incoming` selects BP (i -> j) or
// BI (j -> i).
inline ConditionVerdict scan_condition(const ShiftSpec& shift, Letter horizon, bool incoming) {
  ConditionVerdict v;
  v.exact = false;
  Letter needed = 0;
  for (Letter j = 0; j <= horizon; ++j) {
    std::optional<Letter> least;
    for (Letter i = 0; i <= horizon && !least; ++i)
      if (incoming ? shift.admissible(i, j) : shift.admissible(j, i)) least = i;
    if (!least) v.witnesses.push_back(j);
    else needed = std::max(needed, *least);
  }
  const char* dir = incoming ? "incoming" : "outgoing";
  if (!v.witnesses.empty()) {
    v.status = ConditionStatus::kRefuted;
    v.evidence = std::string("horizon-bounded: listed letters have no ") + dir +
                 " edge from any letter <= " + std::to_string(horizon);
  } else {
    v.status = ConditionStatus::kUndecided;
    v.bound = needed;
    v.evidence = "N = " + std::to_string(needed) + " works for letters <= " +
                 std::to_string(horizon) + "; beyond the horizon the oracle is not decidable";
  }
  return v;
}

}  // namespace detail

// BP: some N such that every letter j has an incoming edge i -> j with i <= N.
inline ConditionVerdict check_bp(const ShiftSpec& shift, Letter horizon) {
  if (horizon < 1) throw SpecError("horizon must be >= 1");
  ConditionVerdict v;
  v.exact = true;
  switch (shift.kind()) {
    case ShiftKind::kFull:
      v.status = ConditionStatus::kSatisfied;
      v.bound = 0;
      v.evidence = "full shift: 0 -> j for every j";
      return v;
    case ShiftKind::kExplicitFinite:
      v.status = ConditionStatus::kSatisfied;
      v.bound = *shift.alphabet_size() - 1;
      v.evidence = "finite alphabet";
      return v;
    case ShiftKind::kRenewal: {
      const auto& r = shift.renewal_rule();
      if (r.a == 1) {
        // Entries are b+1, b+2, ...; letters 1..b are entered only from j+1.
        v.status = ConditionStatus::kSatisfied;
        v.bound = r.b == 0 ? 0 : r.b + 1;
        v.evidence = "every letter >= " + std::to_string(r.b + 1) +
                     " is entered from 0; letters 1.." + std::to_string(r.b) +
                     " are entered from their successor";
        return v;
      }
      v.status = ConditionStatus::kRefuted;
      for (Letter j = 1; j <= horizon; ++j)
        if (!r.is_entry(j)) v.witnesses.push_back(j);
      v.evidence = "infinitely many letters are not entries d_n; each such j has sole "
                   "incoming letter j+1, so no finite N works";
      return v;
    }
    case ShiftKind::kOracle: return detail::scan_condition(shift, horizon, true);
  }
  return v;
}

// BI: some N such that every letter j has an outgoing edge j -> i with i <= N.
inline ConditionVerdict check_bi(const ShiftSpec& shift, Letter horizon) {
  if (horizon < 1) throw SpecError("horizon must be >= 1");
  ConditionVerdict v;
  v.exact = true;
  switch (shift.kind()) {
    case ShiftKind::kFull:
      v.status = ConditionStatus::kSatisfied;
      v.bound = 0;
      v.evidence = "full shift: j -> 0 for every j";
      return v;
    case ShiftKind::kExplicitFinite:
      v.status = ConditionStatus::kSatisfied;
      v.bound = *shift.alphabet_size() - 1;
      v.evidence = "finite alphabet";
      return v;
    case ShiftKind::kRenewal:
      v.status = ConditionStatus::kRefuted;
      for (Letter j = 1; j <= horizon; ++j) v.witnesses.push_back(j);
      v.evidence = "every letter j >= 1 has sole outgoing edge j -> j-1, so no finite N works";
      return v;
    case ShiftKind::kOracle: return detail::scan_condition(shift, horizon, false);
  }
  return v;
}

}  // namespace peierls
