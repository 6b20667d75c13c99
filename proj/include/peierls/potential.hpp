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

// Finite-memory coercive potentials.
//
// f(x) depends on x_0 .. x_{k-1} only. Its value on a depth-k word is taken
// from an override table when present and from the coercive tail u(x_0)
// otherwise, so sup f|[j] = u(j) for every letter beyond the table and
// f is coercive as soon as c > 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "peierls/common.hpp"
#include "peierls/shift_space.hpp"

namespace peierls {

enum class TailKind { kLinear, kLogarithmic };

inline const char* to_string(TailKind k) { return k == TailKind::kLinear ? "linear" : "log"; }

// u(j) = -c*j or u(j) = -c*ln(1+j); strictly decreasing for c > 0.
struct Tail {
  TailKind kind = TailKind::kLinear;
  double c = 1.0;

  double operator()(Letter j) const {
    const double x = static_cast<double>(j);
    return kind == TailKind::kLinear ? -c * x : -c * std::log1p(x);
  }
};

class PotentialSpec {
 public:
  PotentialSpec(std::size_t depth, Tail tail, std::map<Word, double> table = {})
      : depth_(depth), tail_(tail), table_(std::move(table)) {
    if (depth_ < 1) throw SpecError("potential depth must be >= 1");
    if (!(tail_.c > 0.0) || !std::isfinite(tail_.c))
      throw SpecError("tail coefficient c must be > 0 (coercivity)");
    for (const auto& [word, value] : table_) {
      if (word.size() != depth_)
        throw SpecError("table word " + word_to_string(word) + " has length " +
                        std::to_string(word.size()) + ", expected depth " + std::to_string(depth_));
      if (std::any_of(word.begin(), word.end(), [](Letter l) { return l < 0; }))
        throw SpecError("table word " + word_to_string(word) + " has a negative letter");
      if (!std::isfinite(value)) throw SpecError("table value must be finite");
    }
  }

  std::size_t depth() const { return depth_; }
  const Tail& tail() const { return tail_; }
  const std::map<Word, double>& table() const { return table_; }

  // Table keys must be admissible in the hosting shift.
  void validate_against(const ShiftSpec& shift) const {
    for (const auto& [word, value] : table_)
      if (!admissible_word(shift, word))
        throw SpecError("table word " + word_to_string(word) + " is not admissible");
  }

  // Upper bound for sup f|[j] over the whole countable shift.
  double sup_bound_on_letter(Letter j) const {
    double best = kNegInf;
    bool all_overridden = depth_ == 1;
    for (auto it = table_.lower_bound(Word{j}); it != table_.end() && it->first.front() == j; ++it)
      best = std::max(best, it->second);
    if (!(all_overridden && best != kNegInf)) best = std::max(best, tail_(j));
    return best;
  }

  // Largest letter used as the first letter of a table word, or -1.
  Letter last_table_letter() const {
    Letter out = -1;
    for (const auto& [word, value] : table_) out = std::max(out, word.front());
    return out;
  }

 private:
  std::size_t depth_;
  Tail tail_;
  std::map<Word, double> table_;
};

inline double evaluate(const PotentialSpec& pot, std::span<const Letter> word) {
  if (word.size() < pot.depth())
    throw SpecError("evaluate: word shorter than potential depth " + std::to_string(pot.depth()));
  const auto& table = pot.table();
  if (!table.empty()) {
    auto it = table.find(Word(word.begin(), word.begin() + pot.depth()));
    if (it != table.end()) return it->second;
  }
  return pot.tail()(word.front());
}

// Admissible words of a given length inside `finite`, lexicographic.
inline std::vector<Word> admissible_words(const FiniteShift& finite, std::size_t length) {
  std::vector<Word> out;
  if (length == 0) return {Word{}};
  Word cur;
  cur.reserve(length);
  const auto& succ = finite.successors();
  const auto& letters = finite.letters();
  // DFS over letter indices.
  std::vector<std::size_t> idx;
  auto extend = [&](auto& self, std::size_t v) -> void {
    cur.push_back(letters[v]);
    if (cur.size() == length) out.push_back(cur);
    else
      for (std::size_t w : succ[v]) self(self, w);
    cur.pop_back();
  };
  for (std::size_t v = 0; v < finite.size(); ++v) extend(extend, v);
  return out;
}

// max |f(w) - f(w')| over admissible depth-k words in `finite` sharing their
// first j letters; zero for j >= k.
inline double var_j(const PotentialSpec& pot, const FiniteShift& finite, std::size_t j) {
  if (j < 1) throw SpecError("var_j needs j >= 1");
  if (j >= pot.depth()) return 0.0;
  const auto words = admissible_words(finite, pot.depth());
  double out = 0.0;
  // Words are lexicographic, so each prefix group is a contiguous run.
  for (std::size_t s = 0; s < words.size();) {
    std::size_t e = s;
    double lo = evaluate(pot, words[s]), hi = lo;
    while (e < words.size() && std::equal(words[s].begin(), words[s].begin() + j, words[e].begin())) {
      const double v = evaluate(pot, words[e]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++e;
    }
    out = std::max(out, hi - lo);
    s = e;
  }
  return out;
}

inline double total_variation(const PotentialSpec& pot, const FiniteShift& finite) {
  double sum = 0.0;
  for (std::size_t j = 1; j < pot.depth(); ++j) sum += var_j(pot, finite, j);
  return sum;
}

// Upper bound for Var(f) on the countable shift: within a prefix group the
// only values are table entries and the default u(w_0).
inline double total_variation_bound(const PotentialSpec& pot) {
  double sum = 0.0;
  const auto& table = pot.table();
  for (std::size_t j = 1; j < pot.depth(); ++j) {
    double var = 0.0;
    for (const auto& [word, value] : table) {
      var = std::max(var, std::abs(value - pot.tail()(word.front())));
      for (const auto& [other, v2] : table)
        if (std::equal(word.begin(), word.begin() + j, other.begin()))
          var = std::max(var, std::abs(value - v2));
    }
    sum += var;
  }
  return sum;
}

namespace detail {

template <class Pick>
double fold_on_letter(const PotentialSpec& pot, const FiniteShift& finite, Letter j, Pick pick) {
  auto start = finite.index_of(j);
  if (!start) throw SpecError("letter " + std::to_string(j) + " not in the truncation");
  const auto words = admissible_words(finite, pot.depth());
  auto first = std::lower_bound(words.begin(), words.end(), Word{j});
  bool any = false;
  double acc = 0.0;
  for (auto it = first; it != words.end() && it->front() == j; ++it) {
    const double v = evaluate(pot, *it);
    acc = any ? pick(acc, v) : v;
    any = true;
  }
  if (!any) throw SpecError("no admissible depth-k word starts with " + std::to_string(j));
  return acc;
}

}  // namespace detail

inline double sup_on_letter(const PotentialSpec& pot, const FiniteShift& finite, Letter j) {
  return detail::fold_on_letter(pot, finite, j, [](double a, double b) { return std::max(a, b); });
}

inline double inf_on_letter(const PotentialSpec& pot, const FiniteShift& finite, Letter j) {
  return detail::fold_on_letter(pot, finite, j, [](double a, double b) { return std::min(a, b); });
}

inline constexpr Letter kMaxCutoff = 100'000'000;

// Smallest J >= -1 such that sup f|[j] < threshold for every letter j > J,
// using the closed form of the tail beyond the table.
inline Letter coercivity_cutoff(const PotentialSpec& pot, double threshold) {
  const Tail& u = pot.tail();
  // u(j) < T  <=>  j > x, with x from inverting the tail.
  const double x = u.kind == TailKind::kLinear ? -threshold / u.c : std::expm1(-threshold / u.c);
  if (!(x < static_cast<double>(kMaxCutoff)))
    throw ComputationLimit("coercivity cutoff for threshold " + format_real(threshold) +
                           " exceeds " + std::to_string(kMaxCutoff));
  Letter cut = x < 0 ? -1 : static_cast<Letter>(std::floor(x));
  while (cut >= 0 && u(cut) < threshold) --cut;
  while (u(cut + 1) >= threshold) ++cut;
  for (Letter j = pot.last_table_letter(); j > cut; --j)
    if (pot.sup_bound_on_letter(j) >= threshold) {
      cut = j;
      break;
    }
  return cut;
}

}  // namespace peierls
