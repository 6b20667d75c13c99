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

// Increasing families of transitive truncations Sigma_k, barrier
// stabilization across them, and the BP / boundedness probe.

#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "peierls/barrier.hpp"
#include "peierls/io.hpp"
#include "peierls/optimizer.hpp"
#include "peierls/potential.hpp"
#include "peierls/shift_space.hpp"

namespace peierls {

struct Stage {
  Letter requested_bound = 0;
  Letter bound = 0;  // n_k actually used (after auto-advance)
  FiniteShift shift;
  WeightedMemoryGraph graph;
  BarrierResult barrier;
  bool from_cache = false;
};

struct TruncationFamily {
  std::shared_ptr<const ShiftSpec> spec;
  PotentialSpec pot;
  std::vector<Stage> stages;
  bool critical_cycle_stable = false;  // same ybar orbit (as words) at every stage
  bool m_non_decreasing = false;
  std::vector<std::string> substitutions;

  double barrier_at(std::size_t stage, const Word& w) const {
    const auto& s = stages.at(stage);
    auto v = s.graph.find_vertex(w);
    return v ? s.barrier.values[*v] : kNegInf;
  }
};

struct FamilyOptions {
  double tol = kDefaultTolerance;
  // Cache directory; empty disables caching.
  std::filesystem::path cache_dir;
};

// Cache directory from PEIERLS_CACHE_DIR, else ".peierls-cache".
inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("PEIERLS_CACHE_DIR"); env && *env) return env;
  return ".peierls-cache";
}

namespace detail {

inline std::string stage_key(const ShiftSpec& spec, const PotentialSpec& pot, Letter bound, double tol) {
  Json key = {{"schema", kSchemaVersion},
              {"shift", to_json(spec)},
              {"potential", to_json(pot)},
              {"bound", bound},
              {"tol", tol}};
  return hex64(content_hash(key.dump()));
}

inline std::optional<std::pair<CycleSolution, std::vector<double>>> load_stage(
    const std::filesystem::path& file, const WeightedMemoryGraph& g) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const Json j = Json::parse(in);
    CycleSolution sol;
    sol.m = j.at("m").get<double>();
    sol.cycle = j.at("cycle").get<std::vector<VertexId>>();
    sol.critical_vertex = j.at("critical_vertex").get<std::vector<char>>();
    sol.critical_edge = j.at("critical_edge").get<std::vector<char>>();
    sol.critical_class_unique = j.at("unique").get<bool>();
    auto values = j.at("values").get<std::vector<double>>();
    if (values.size() != g.vertex_count() || sol.critical_vertex.size() != g.vertex_count() ||
        sol.critical_edge.size() != g.edge_count() || sol.cycle.empty())
      return std::nullopt;
    return std::make_pair(std::move(sol), std::move(values));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline void store_stage(const std::filesystem::path& file, const CycleSolution& sol,
                        const std::vector<double>& values) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  if (ec) return;
  Json j = {{"m", sol.m},
            {"cycle", sol.cycle},
            {"critical_vertex", sol.critical_vertex},
            {"critical_edge", sol.critical_edge},
            {"unique", sol.critical_class_unique},
            {"values", values}};
  // Write-then-rename so concurrent readers never see a partial file.
  const fs::path tmp = file.string() + ".tmp" + std::to_string(content_hash(file.string() + j.dump()));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  fs::rename(tmp, file, ec);
  if (ec) fs::remove(tmp, ec);
}

}  // namespace detail

inline Stage build_stage(const std::shared_ptr<const ShiftSpec>& spec, const PotentialSpec& pot,
                         Letter requested, Letter min_bound, const FamilyOptions& opt = {}) {
  Stage s{requested, 0, transitive_truncation(*spec, min_bound), {}, {}, false};
  s.bound = s.shift.max_letter();
  s.graph = build_memory_graph(s.shift, pot);
  const bool cacheable = !opt.cache_dir.empty() && spec->kind() != ShiftKind::kOracle;
  std::filesystem::path file;
  if (cacheable) {
    file = opt.cache_dir / (detail::stage_key(*spec, pot, s.bound, opt.tol) + ".json");
    if (auto hit = detail::load_stage(file, s.graph)) {
      s.graph.attach_solution(std::move(hit->first));
      s.barrier = BarrierResult{s.graph.critical_cycle().front(), s.graph.critical_cycle(),
                                std::move(hit->second), s.graph.m(), std::nullopt};
      s.from_cache = true;
    }
  }
  if (!s.from_cache) {
    s.graph = optimize(std::move(s.graph), opt.tol);
    s.barrier = compute_barrier(s.graph, opt.tol);
    if (cacheable) detail::store_stage(file, s.graph.solution(), s.barrier.values);
  }
  s.barrier.bounds = barrier_bounds(s.graph, s.shift, pot, s.barrier);
  return s;
}

inline TruncationFamily build_family(const ShiftSpec& spec, const PotentialSpec& pot,
                                     const std::vector<Letter>& max_letters,
                                     const FamilyOptions& opt = {}) {
  if (max_letters.empty()) throw SpecError("build_family needs at least one stage");
  for (std::size_t i = 1; i < max_letters.size(); ++i)
    if (max_letters[i] <= max_letters[i - 1])
      throw SpecError("stage bounds must be strictly increasing");
  if (spec.kind() != ShiftKind::kOracle) pot.validate_against(spec);

  TruncationFamily fam{std::make_shared<const ShiftSpec>(spec), pot, {}, true, true, {}};
  for (Letter requested : max_letters) {
    // A finite alphabet saturates: later stages repeat the full graph.
    Letter min_bound = requested;
    if (!fam.stages.empty() && !spec.finite_alphabet())
      min_bound = std::max(min_bound, fam.stages.back().bound + 1);
    Stage s = build_stage(fam.spec, pot, requested, min_bound, opt);
    if (s.bound > requested)
      fam.substitutions.push_back("stage " + std::to_string(requested) + " advanced to " +
                                  std::to_string(s.bound));
    else if (s.bound < requested)
      fam.substitutions.push_back("stage " + std::to_string(requested) + " saturated at " +
                                  std::to_string(s.bound));
    if (!fam.stages.empty()) {
      const auto& prev = fam.stages.back();
      if (s.graph.m() < prev.graph.m() - opt.tol) fam.m_non_decreasing = false;
      auto words = [](const Stage& st) {
        std::vector<Word> w;
        for (VertexId v : st.barrier.ybar_cycle) w.push_back(st.graph.vertex(v));
        return w;
      };
      if (words(s) != words(prev)) fam.critical_cycle_stable = false;
    }
    fam.stages.push_back(std::move(s));
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Stabilization

struct LetterStabilization {
  Letter letter = 0;
  bool stabilized = false;
  std::size_t stage_index = 0;       // first stage from which values stay fixed
  Letter observed_bound = 0;         // n_k of that stage
  std::optional<CutoffReport> cutoff;
  bool consistent = false;           // observed_bound <= predicted N(a)
  std::vector<std::map<Word, double>> values_per_stage;
};

struct StabilizationReport {
  std::vector<LetterStabilization> letters;
  // Barrier never decreases from one stage to the next on shared vertices
  // (checked where m and ybar agree).
  bool monotone = true;
  std::vector<std::string> monotonicity_violations;
};

inline StabilizationReport stabilization_experiment(const TruncationFamily& fam,
                                                    const std::vector<Letter>& letters,
                                                    double tol = kDefaultTolerance) {
  if (fam.stages.size() < 2) throw SpecError("stabilization needs at least two stages");
  StabilizationReport rep;

  for (std::size_t s = 1; s < fam.stages.size(); ++s) {
    const auto& a = fam.stages[s - 1];
    const auto& b = fam.stages[s];
    if (std::abs(a.graph.m() - b.graph.m()) > tol ||
        a.graph.vertex(a.barrier.ybar) != b.graph.vertex(b.barrier.ybar))
      continue;
    for (VertexId v = 0; v < a.graph.vertex_count(); ++v) {
      const double later = fam.barrier_at(s, a.graph.vertex(v));
      if (later < a.barrier.values[v] - tol) {
        rep.monotone = false;
        rep.monotonicity_violations.push_back("stage " + std::to_string(s) + " vertex " +
                                              word_to_string(a.graph.vertex(v)));
      }
    }
  }

  for (Letter letter : letters) {
    LetterStabilization ls;
    ls.letter = letter;
    for (const auto& st : fam.stages) {
      std::map<Word, double> vals;
      for (VertexId v = 0; v < st.graph.vertex_count(); ++v)
        if (st.graph.vertex(v).front() == letter) vals.emplace(st.graph.vertex(v), st.barrier.values[v]);
      ls.values_per_stage.push_back(std::move(vals));
    }
    auto same = [&](const std::map<Word, double>& x, const std::map<Word, double>& y) {
      if (x.size() != y.size() || x.empty()) return false;
      for (auto ix = x.begin(), iy = y.begin(); ix != x.end(); ++ix, ++iy)
        if (ix->first != iy->first || std::abs(ix->second - iy->second) > tol) return false;
      return true;
    };
    const std::size_t last = fam.stages.size() - 1;
    std::size_t first = last;
    while (first > 0 && same(ls.values_per_stage[first - 1], ls.values_per_stage[last])) --first;
    // Stabilization needs a later stage confirming the value.
    ls.stabilized = first < last && !ls.values_per_stage[first].empty();
    ls.stage_index = first;
    ls.observed_bound = fam.stages[first].bound;
    const auto host = std::find_if(fam.stages.begin(), fam.stages.end(),
                                   [&](const Stage& st) { return st.shift.contains(letter); });
    if (host != fam.stages.end()) {
      ls.cutoff = letter_cutoff(*fam.spec, fam.pot, host->shift, letter, tol);
      ls.consistent = ls.stabilized && ls.observed_bound <= ls.cutoff->n_cutoff;
    }
    rep.letters.push_back(std::move(ls));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// BP / boundedness probe

enum class Boundedness { kBounded, kDivergent, kInconclusive };

inline const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::kBounded: return "BOUNDED";
    case Boundedness::kDivergent: return "DIVERGENT";
    case Boundedness::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

inline constexpr std::size_t kMinTrendLetters = 5;

struct BoundednessProbe {
  std::map<Letter, double> floors;  // letter -> min barrier on vertices starting with it
  ConditionVerdict bp;
  Boundedness boundedness = Boundedness::kInconclusive;
  double floor = 0.0;               // min floor (BOUNDED)
  double slope = 0.0;               // least-squares slope over the fit letters
  std::vector<Letter> fit_letters;
  bool consistent = true;           // false only on a decided disagreement
  std::string conclusion;
};

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0 ? 0.0 : sxy / sxx;
}

// Floors are read from the final stage. The trend is fitted over the BP
// witnesses (letters with no bounded entry) when BP is refuted, and over every
// scanned letter otherwise. DIVERGENT needs >= 5 letters whose floors never
// increase and a slope <= -tol; BOUNDED needs a flat-or-rising tail of >= 5
// letters, or a finite alphabet.
inline BoundednessProbe bp_boundedness_probe(const TruncationFamily& fam, const ShiftSpec& spec,
                                             Letter scan_to, double tol = kDefaultTolerance) {
  const Stage& last = fam.stages.back();
  if (!spec.finite_alphabet() && last.bound < scan_to)
    throw SpecError("probe: final stage bound " + std::to_string(last.bound) + " < scan_to " +
                    std::to_string(scan_to));
  BoundednessProbe p;
  for (VertexId v = 0; v < last.graph.vertex_count(); ++v) {
    const Letter l = last.graph.vertex(v).front();
    if (l > scan_to) continue;
    auto [it, fresh] = p.floors.emplace(l, last.barrier.values[v]);
    if (!fresh) it->second = std::min(it->second, last.barrier.values[v]);
  }
  p.bp = check_bp(spec, std::max<Letter>(scan_to, 1));

  double min_floor = std::numeric_limits<double>::infinity();
  for (const auto& [l, f] : p.floors) min_floor = std::min(min_floor, f);

  if (p.bp.status == ConditionStatus::kRefuted) {
    for (Letter w : p.bp.witnesses)
      if (p.floors.count(w)) p.fit_letters.push_back(w);
  } else {
    for (const auto& [l, f] : p.floors) p.fit_letters.push_back(l);
  }
  std::vector<double> xs, ys;
  for (Letter l : p.fit_letters) {
    xs.push_back(static_cast<double>(l));
    ys.push_back(p.floors[l]);
  }
  if (xs.size() >= 2) p.slope = least_squares_slope(xs, ys);

  if (spec.finite_alphabet()) {
    p.boundedness = Boundedness::kBounded;
    p.floor = min_floor;
  } else if (xs.size() >= kMinTrendLetters) {
    bool non_increasing = true;
    for (std::size_t i = 1; i < ys.size(); ++i) non_increasing &= ys[i] <= ys[i - 1] + tol;
    const std::size_t tail = std::max(kMinTrendLetters, xs.size() / 2);
    const std::vector<double> tx(xs.end() - tail, xs.end()), ty(ys.end() - tail, ys.end());
    const double tail_slope = least_squares_slope(tx, ty);
    if (non_increasing && p.slope <= -tol) {
      p.boundedness = Boundedness::kDivergent;
    } else if (tail_slope > -tol) {
      p.boundedness = Boundedness::kBounded;
      p.floor = min_floor;
    }
  }

  using CS = ConditionStatus;
  const bool decided = p.bp.exact && p.bp.status != CS::kUndecided &&
                       p.boundedness != Boundedness::kInconclusive;
  if (decided) {
    const bool bp_ok = p.bp.status == CS::kSatisfied;
    p.consistent = bp_ok == (p.boundedness == Boundedness::kBounded);
  }
  if (!p.consistent)
    p.conclusion = std::string("INCONSISTENT: BP ") + to_string(p.bp.status) + " but barrier " +
                   to_string(p.boundedness);
  else if (decided && p.boundedness == Boundedness::kDivergent)
    p.conclusion = "no bounded calibrated subaction exists";
  else if (decided)
    p.conclusion = "the barrier is bounded below: a bounded calibrated subaction exists";
  else
    p.conclusion = "undetermined";
  return p;
}

// Flat (stage, vertex, barrier) rows for plotting.
inline std::string family_csv(const TruncationFamily& fam) {
  std::string out = "stage,vertex_word,barrier_value\n";
  for (const auto& st : fam.stages)
    for (VertexId v = 0; v < st.graph.vertex_count(); ++v)
      out += std::to_string(st.bound) + "," + word_to_string(st.graph.vertex(v)) + "," +
             format_real(st.barrier.values[v]) + "\n";
  return out;
}

}  // namespace peierls
