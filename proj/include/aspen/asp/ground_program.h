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

#ifndef ASPEN_ASP_GROUND_PROGRAM_H
#define ASPEN_ASP_GROUND_PROGRAM_H

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "aspen/asp/program.h"

namespace aspen::asp {

/// Atom ids are dense, 1-based and stable within one grounding. A signed
/// literal +id means "id is true", -id means "not id".
using Atom = int32_t;
using Lit = int32_t;

/// One instance of a ground conditional body element: if all `cond` literals
/// hold then `then` must hold (then == 0 encodes "false", i.e. the condition
/// must not be satisfied).
struct GroundCondInstance {
  std::vector<Lit> cond;
  Lit then = 0;
};

/// Conjunction of instances; the body element is true iff every instance's
/// implication holds.
struct GroundConditional {
  std::vector<GroundCondInstance> instances;
};

struct GroundAggElement {
  std::string tupleKey;   // canonical distinctness key
  std::vector<Lit> cond;  // all must hold for the tuple to be counted
};

/// #count over distinct tuple keys, with optional integer bounds
/// (kNoBound when absent). rel semantics are pre-normalized to
/// lo <= count <= hi plus an optional != exclusion.
struct GroundAggregate {
  static constexpr int64_t kNoBound = INT64_MIN;
  std::vector<GroundAggElement> elements;
  int64_t lower = kNoBound; // count >= lower
  int64_t upper = kNoBound; // count <= upper
  int64_t notEqual = kNoBound;
};

enum class GroundRuleKind : uint8_t { Normal, Disjunctive, Choice, Constraint, Weak };

struct GroundRule {
  GroundRuleKind kind = GroundRuleKind::Normal;
  std::vector<Atom> head;        // Normal: 1; Disjunctive: >1; Choice: members
  // Choice members may carry element conditions (parallel to head; empty =
  // unconditional): a member is offered/counted only while its condition holds.
  std::vector<std::vector<Lit>> headConds;
  int64_t choiceLower = 0;
  int64_t choiceUpper = -1;      // -1 = no upper bound
  std::vector<Lit> body;         // plain literals
  std::vector<GroundConditional> conditionals;
  std::vector<GroundAggregate> aggregates;
  // Weak constraint payload
  int64_t weight = 0;
  int64_t level = 0;
  std::string tupleKey;
  int srcLine = 0;
};

struct GroundProgram {
  std::vector<Term> atoms;                       // [0] unused; ids are 1-based
  std::unordered_map<Term, Atom, TermHash> atomIds;
  std::vector<bool> fact;                        // derivable unconditionally
  std::vector<bool> internal;                    // projection helpers etc.
  std::vector<GroundRule> rules;
  std::vector<std::pair<Atom, Atom>> complementPairs; // p / -p
  std::string name;

  Atom idOf(const Term& t) const {
    auto it = atomIds.find(t);
    return it == atomIds.end() ? 0 : it->second;
  }
  size_t atomCount() const { return atoms.empty() ? 0 : atoms.size() - 1; }
  std::string atomName(Atom a) const { return atoms[a].toString(); }
};

struct GroundOptions {
  std::map<std::string, Term> constantBindings; // caller overrides for #const
  size_t maxGroundRules = 10'000'000;
  bool naive = false; // full cross-product instantiation (testing oracle)
  // Drop rules that can never fire and rules defining predicates no live rule
  // consumes (transitively). Changes which derived atoms appear in answer
  // sets, so it is off by default; keepPredicates are always retained.
  bool eliminateDeadRules = false;
  std::set<std::string> keepPredicates;
};

} // namespace aspen::asp

#endif
