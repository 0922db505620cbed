// Copyright 2026 The Aspen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASPEN_ASP_TERM_H
#define ASPEN_ASP_TERM_H

#include <cstdint>
#include <string>
#include <vector>

namespace aspen::asp {

enum class TermKind : uint8_t {
  Number,    // integer constant
  Symbol,    // lowercase-initial identifier
  String,    // quoted string constant (text_ holds the unquoted content)
  Variable,  // uppercase-initial identifier; anonymous "_" vars get unique names "_1", "_2", ...
  Compound,  // functor(args...); empty functor = tuple term
  Interval,  // args[0]..args[1]
  Binary,    // args[0] op args[1]
  Unary      // -args[0] or |args[0]|
};

enum class ArithOp : uint8_t { Add, Sub, Mul, Neg, Abs };

/// A logic term with value semantics. Ground terms contain no Variable,
/// Interval, Binary or Unary nodes.
struct Term {
  TermKind kind = TermKind::Symbol;
  int64_t num = 0;           // Number payload
  std::string text;          // symbol/string/variable name, compound functor
  ArithOp op = ArithOp::Add; // Binary/Unary payload
  std::vector<Term> args;
  bool anonymous = false;    // variable introduced by "_"

  static Term number(int64_t v);
  static Term symbol(std::string name);
  static Term string(std::string content);
  static Term variable(std::string name, bool anonymous = false);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term tuple(std::vector<Term> args);
  static Term interval(Term lo, Term hi);
  static Term binary(ArithOp op, Term lhs, Term rhs);
  static Term unary(ArithOp op, Term arg);

  bool isGround() const;
  bool hasVariables() const;

  /// Canonical text form: f(a,b), (a,b), "s", 12, lo..hi, X+1, |X|.
  std::string toString() const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  /// Deterministic total order: Number < Symbol < String < Compound,
  /// then by payload, then lexicographically over arguments.
  bool operator<(const Term& other) const;

  size_t hash() const;
};

struct TermHash {
  size_t operator()(const Term& t) const { return t.hash(); }
};

int compareTerms(const Term& a, const Term& b);

} // namespace aspen::asp

#endif
