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

// JSON / CSV front end: shift and potential documents, per-vertex value
// tables, and report serialization.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "peierls/barrier.hpp"
#include "peierls/optimizer.hpp"
#include "peierls/potential.hpp"
#include "peierls/shift_space.hpp"
#include "peierls/subaction.hpp"

namespace peierls {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline Json parse_document(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

inline void only_keys(const Json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  if (!j.is_object()) throw SpecError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok |= key == a;
    if (!ok) throw SpecError(std::string(what) + ": unexpected key \"" + key + "\"");
  }
}

inline std::int64_t get_int(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw SpecError(std::string(what) + ": \"" + key + "\" must be an integer");
  return j[key].get<std::int64_t>();
}

inline double get_real(const Json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number())
    throw SpecError(std::string(what) + ": \"" + key + "\" must be a number");
  return j[key].get<double>();
}

inline Word get_word(const Json& j, const char* what) {
  if (!j.is_array()) throw SpecError(std::string(what) + ": expected an array of letters");
  Word w;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw SpecError(std::string(what) + ": letters must be integers");
    w.push_back(x.get<Letter>());
  }
  return w;
}

}  // namespace detail

inline ShiftSpec shift_from_json(const Json& j) {
  const char* what = "shift spec";
  detail::only_keys(j, {"kind", "alphabet_size", "edges", "renewal", "lambda"}, what);
  if (!j.contains("kind") || !j["kind"].is_string()) throw SpecError("shift spec: missing \"kind\"");
  const std::string kind = j["kind"];
  const double lambda = j.contains("lambda") ? detail::get_real(j, "lambda", what) : 0.5;
  if (kind == "full") {
    detail::only_keys(j, {"kind", "alphabet_size", "lambda"}, what);
    return ShiftSpec::full(detail::get_int(j, "alphabet_size", what), lambda);
  }
  if (kind == "explicit-finite") {
    detail::only_keys(j, {"kind", "alphabet_size", "edges", "lambda"}, what);
    if (!j.contains("edges") || !j["edges"].is_array())
      throw SpecError("shift spec: \"edges\" must be an array");
    std::vector<LetterPair> edges;
    for (const auto& e : j["edges"]) {
      const Word w = detail::get_word(e, what);
      if (w.size() != 2) throw SpecError("shift spec: each edge must be [i, j]");
      edges.emplace_back(w[0], w[1]);
    }
    return ShiftSpec::explicit_finite(detail::get_int(j, "alphabet_size", what), std::move(edges),
                                      lambda);
  }
  if (kind == "renewal") {
    detail::only_keys(j, {"kind", "renewal", "lambda"}, what);
    if (!j.contains("renewal")) throw SpecError("shift spec: renewal kind needs \"renewal\": {a, b}");
    detail::only_keys(j["renewal"], {"a", "b"}, "renewal rule");
    return ShiftSpec::renewal({detail::get_int(j["renewal"], "a", "renewal rule"),
                               detail::get_int(j["renewal"], "b", "renewal rule")},
                              lambda);
  }
  if (kind == "oracle") throw SpecError("shift spec: oracle shifts are library-only");
  throw SpecError("shift spec: unknown kind \"" + kind + "\"");
}

inline ShiftSpec parse_shift_spec(std::string_view text) {
  return shift_from_json(detail::parse_document(text, "shift spec"));
}

inline Json to_json(const ShiftSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind());
  switch (s.kind()) {
    case ShiftKind::kFull: j["alphabet_size"] = *s.alphabet_size(); break;
    case ShiftKind::kExplicitFinite: {
      j["alphabet_size"] = *s.alphabet_size();
      Json edges = Json::array();
      for (const auto& [a, b] : s.edges()) edges.push_back({a, b});
      j["edges"] = edges;
      break;
    }
    case ShiftKind::kRenewal:
      j["renewal"] = {{"a", s.renewal_rule().a}, {"b", s.renewal_rule().b}};
      break;
    case ShiftKind::kOracle: throw SpecError("oracle shifts cannot be serialized");
  }
  j["lambda"] = s.lambda();
  return j;
}

inline PotentialSpec potential_from_json(const Json& j) {
  const char* what = "potential spec";
  detail::only_keys(j, {"depth", "tail", "table"}, what);
  const auto depth = detail::get_int(j, "depth", what);
  if (depth < 1) throw SpecError("potential spec: depth must be >= 1");
  if (!j.contains("tail")) throw SpecError("potential spec: missing \"tail\"");
  const Json& t = j["tail"];
  detail::only_keys(t, {"kind", "c"}, "tail");
  if (!t.contains("kind") || !t["kind"].is_string()) throw SpecError("tail: missing \"kind\"");
  Tail tail;
  const std::string kind = t["kind"];
  if (kind == "linear") tail.kind = TailKind::kLinear;
  else if (kind == "log") tail.kind = TailKind::kLogarithmic;
  else throw SpecError("tail: kind must be \"linear\" or \"log\"");
  tail.c = detail::get_real(t, "c", "tail");
  std::map<Word, double> table;
  if (j.contains("table")) {
    if (!j["table"].is_array()) throw SpecError("potential spec: \"table\" must be an array");
    for (const auto& row : j["table"]) {
      detail::only_keys(row, {"word", "value"}, "table row");
      if (!row.contains("word")) throw SpecError("table row: missing \"word\"");
      Word w = detail::get_word(row["word"], "table row");
      if (!table.emplace(w, detail::get_real(row, "value", "table row")).second)
        throw SpecError("table row: duplicate word " + word_to_string(w));
    }
  }
  return PotentialSpec(static_cast<std::size_t>(depth), tail, std::move(table));
}

inline PotentialSpec parse_potential_spec(std::string_view text) {
  return potential_from_json(detail::parse_document(text, "potential spec"));
}

inline Json to_json(const PotentialSpec& p) {
  Json j;
  j["depth"] = p.depth();
  j["tail"] = {{"kind", to_string(p.tail().kind)}, {"c", p.tail().c}};
  Json table = Json::array();
  for (const auto& [w, v] : p.table()) table.push_back({{"word", w}, {"value", v}});
  j["table"] = table;
  return j;
}

// 64-bit FNV-1a of a string; stable across platforms, used for cache keys.
inline std::uint64_t content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[i] = digits[x & 15];
  return s;
}

// ---------------------------------------------------------------------------
// Per-vertex value tables: "vertex_word,value" with letters joined by '-',
// rows in lexicographic word order.

inline std::string values_to_csv(const WeightedMemoryGraph& g, const VertexValues& values,
                                 std::string_view column = "barrier_value") {
  std::string out = "vertex_word,";
  out += column;
  out += '\n';
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    out += word_to_string(g.vertex(v)) + "," + format_real(values[v]) + "\n";
  return out;
}

inline std::map<Word, double> parse_values_csv(std::string_view text) {
  std::map<Word, double> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw SpecError("values CSV line " + std::to_string(lineno) + ": expected two columns");
    const std::string key = line.substr(0, comma), val = line.substr(comma + 1);
    if (lineno == 1 && key == "vertex_word") continue;
    Word w;
    std::size_t pos = 0;
    try {
      while (pos <= key.size()) {
        const auto dash = key.find('-', pos);
        const std::string part = key.substr(pos, dash == std::string::npos ? std::string::npos : dash - pos);
        std::size_t used = 0;
        w.push_back(std::stoll(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
        if (dash == std::string::npos) break;
        pos = dash + 1;
      }
      std::size_t used = 0;
      const double value = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
      if (!out.emplace(w, value).second)
        throw SpecError("values CSV line " + std::to_string(lineno) + ": duplicate vertex");
    } catch (const std::logic_error&) {
      throw SpecError("values CSV line " + std::to_string(lineno) + ": cannot parse \"" + line + "\"");
    }
  }
  return out;
}

// Align a parsed table with the graph's vertices; every vertex must appear
// exactly once.
inline VertexValues align_values(const WeightedMemoryGraph& g, const std::map<Word, double>& table) {
  VertexValues V(g.vertex_count());
  if (table.size() != g.vertex_count())
    throw SpecError("values table has " + std::to_string(table.size()) + " rows, graph has " +
                    std::to_string(g.vertex_count()) + " vertices");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto it = table.find(g.vertex(v));
    if (it == table.end()) throw SpecError("values table misses vertex " + word_to_string(g.vertex(v)));
    V[v] = it->second;
  }
  return V;
}

// ---------------------------------------------------------------------------
// Reports

inline Json real_json(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return x == 0.0 ? Json(0.0) : Json(x);
}

inline Json to_json(const ConditionVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["bound"] = v.bound ? Json(*v.bound) : Json(nullptr);
  j["witnesses"] = v.witnesses;
  j["exact"] = v.exact;
  j["evidence"] = v.evidence;
  return j;
}

inline Json cycle_json(const WeightedMemoryGraph& g, const std::vector<VertexId>& cycle) {
  Json c = Json::array();
  for (VertexId v : cycle) c.push_back(g.vertex(v));
  return c;
}

inline Json optimize_json(const WeightedMemoryGraph& g) {
  const auto& sol = g.solution();
  Json j;
  j["schema"] = kSchemaVersion;
  j["m"] = real_json(sol.m);
  j["cycle"] = cycle_json(g, sol.cycle);
  j["critical_class_unique"] = sol.critical_class_unique;
  Json crit = Json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (sol.critical_vertex[v]) crit.push_back(g.vertex(v));
  j["critical_class"] = crit;
  return j;
}

inline Json to_json(const LetterBound& b) {
  return {{"letter", b.letter},
          {"path_length", b.path_length},
          {"alpha", real_json(b.alpha)},
          {"var_f", real_json(b.var_f)},
          {"bound", real_json(b.bound)}};
}

inline Json to_json(const UpperBoundReport& r) {
  Json per = Json::array();
  for (const auto& b : r.per_letter) per.push_back(to_json(b));
  return {{"per_letter", per},
          {"delta_cutoff", r.delta_cutoff},
          {"delta1", real_json(r.delta1)},
          {"delta2", real_json(r.delta2)},
          {"var_f", real_json(r.var_f)},
          {"global_bound", real_json(r.global_bound)}};
}

inline Json to_json(const CutoffReport& c) {
  return {{"letter", c.letter},
          {"m", real_json(c.m)},
          {"var_f", real_json(c.var_f)},
          {"L_w", c.l_w},
          {"threshold_J", real_json(c.threshold_j)},
          {"J", c.j_cutoff},
          {"k2_bound", c.k2_bound},
          {"L_2", c.l_2},
          {"threshold_I", real_json(c.threshold_i)},
          {"I", c.i_cutoff},
          {"N", c.n_cutoff}};
}

inline Json barrier_json(const WeightedMemoryGraph& g, const BarrierResult& b) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["m"] = real_json(b.m);
  j["ybar"] = cycle_json(g, b.ybar_cycle);
  Json values = Json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    values.push_back({{"vertex", g.vertex(v)}, {"value", real_json(b.values[v])}});
  j["values"] = values;
  if (b.bounds) j["bounds"] = to_json(*b.bounds);
  return j;
}

inline Json to_json(const WeightedMemoryGraph& g, const SubactionReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["is_subaction"] = r.is_subaction;
  j["worst_violation"] = real_json(r.worst_violation);
  j["is_calibrated"] = r.is_calibrated;
  Json unc = Json::array();
  for (VertexId v : r.uncalibrated_vertices) unc.push_back(g.vertex(v));
  j["uncalibrated_vertices"] = unc;
  Json contact = Json::array();
  for (const auto& c : r.contact_edges) {
    const auto& e = g.edge(c.edge);
    contact.push_back({{"from", g.vertex(e.from)}, {"to", g.vertex(e.to)}, {"slack", real_json(c.slack)}});
  }
  j["contact_edges"] = contact;
  j["supp_in_contact"] = r.supp_in_contact;
  return j;
}

inline Json to_json(const ConstantComparison& c) {
  return {{"schema", kSchemaVersion},
          {"is_constant_diff", c.is_constant_diff},
          {"constant", real_json(c.constant)},
          {"max_deviation", real_json(c.max_deviation)}};
}

}  // namespace peierls
