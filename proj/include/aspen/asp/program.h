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

#ifndef ASPEN_ASP_PROGRAM_H
#define ASPEN_ASP_PROGRAM_H

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aspen/asp/term.h"

namespace aspen::asp {

enum class Rel : uint8_t { Eq, Neq, Lt, Leq, Gt, Geq };

const char* relText(Rel r);
bool relHolds(Rel r, int64_t lhs, int64_t rhs);
bool relHolds(Rel r, const Term& lhs, const Term& rhs);

/// Atom literal (possibly strongly negated and/or default-negated) or a
/// builtin comparison between two terms.
struct Literal {
  bool builtin = false;
  bool defaultNeg = false; // "not"
  bool strongNeg = false;  // leading "-"
  Term atom;               // predicate term when !builtin
  Term lhs, rhs;           // builtin operands
  Rel rel = Rel::Eq;

  static Literal fromAtom(Term a, bool strongNeg = false, bool defaultNeg = false);
  static Literal comparison(Term l, Rel r, Term rh, bool defaultNeg = false);

  std::string toString() const;
};

/// l : c1, ..., cn  — in a body, satisfied iff l holds for every ground
/// instantiation of the element's local variables satisfying all ci.
struct ConditionalLiteral {
  Literal head;
  std::vector<Literal> condition;
  std::string toString() const;
};

/// One #count/cardinality element: count the distinct ground `tuple`
/// instances whose condition literals all hold.
struct AggregateElement {
  std::vector<Term> tuple;
  std::vector<Literal> condition;
};

/// #count{...} or shorthand cardinality lo{...}hi in a rule body. Guards are
/// stored as optional (rel, term) pairs applied as `agg rel term`.
struct Aggregate {
  std::vector<AggregateElement> elements;
  std::optional<std::pair<Rel, Term>> leftGuard;  // term REL #count{...}, stored flipped
  std::optional<std::pair<Rel, Term>> rightGuard; // #count{...} REL term
  std::string toString() const;
};

using BodyElement = std::variant<Literal, ConditionalLiteral, Aggregate>;

std::string toString(const BodyElement& e);

struct ChoiceElement {
  Literal lit;
  std::vector<Literal> condition;
};

/// lo { elements } hi, or { elements } = k.
struct ChoiceHead {
  std::vector<ChoiceElement> elements;
  std::optional<Term> lower, upper;
  std::optional<Term> exact; // "= k" form
};

enum class RuleKind : uint8_t { Basic, Choice, Constraint, Weak };

/// One statement. Basic covers single-literal and disjunctive heads
/// (head.size() > 1). Weak constraints carry weight/level/tuple.
struct Rule {
  RuleKind kind = RuleKind::Basic;
  std::vector<Literal> head; // Basic: one or more (disjunction)
  ChoiceHead choice;         // Choice
  std::vector<BodyElement> body;
  Term weight, level;        // Weak
  std::vector<Term> tuple;   // Weak terms
  int line = 0;

  std::string toString() const;
};

struct Program {
  std::vector<Rule> rules;
  std::map<std::string, Term> constants; // #const definitions
  std::string name;

  std::string toString() const;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg), line(line), col(col) {}
  int line, col;
};

struct GroundError : std::runtime_error {
  explicit GroundError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace aspen::asp

#endif
