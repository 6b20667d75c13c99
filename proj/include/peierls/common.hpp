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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace peierls {

// Letters of a countable alphabet are the natural numbers.
using Letter = std::int64_t;
using Word = std::vector<Letter>;

// Absolute tolerance used by every equality / sign test on reduced weights.
inline constexpr double kDefaultTolerance = 1e-9;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Base for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (specs, potentials, flags).
class SpecError : public Error {
 public:
  using Error::Error;
};

// A truncation could not be made transitive / non-empty.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// A computed m(f) is inconsistent with the graph: some reduced cycle is
// positive. Always an internal failure.
class PositiveCycleError : public Error {
 public:
  using Error::Error;
};

// A closed-form cutoff exceeds what can be enumerated.
class ComputationLimit : public Error {
 public:
  using Error::Error;
};

inline std::string word_to_string(const Word& w, char sep = '-') {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(w[i]);
  }
  return out;
}

// Shortest round-trip decimal, always with a fractional part or exponent so
// that "0" prints as "0.0"; negative zero is normalized.
inline std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

}  // namespace peierls
