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

#ifndef ASPEN_ASP_SOLVER_H
#define ASPEN_ASP_SOLVER_H

#include <map>
#include <optional>
#include <set>

#include "aspen/asp/ground_program.h"

namespace aspen::asp {

/// Cost per priority level; lexicographic order compares higher levels
/// first, lower cost better. Missing levels count as zero.
using CostVector = std::map<int64_t, int64_t>;

/// Returns <0 / 0 / >0 when a is lexicographically better / equal / worse.
int compareCost(const CostVector& a, const CostVector& b);

struct AnswerSet {
  std::set<Term> atoms; // externally visible atoms, including strong negations
  CostVector cost;      // present iff the program has weak constraints
};

enum class SolveStatus { Sat, Unsat, OptimumFound };

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  std::vector<AnswerSet> models;
  CostVector optimum; // meaningful when status == OptimumFound
  std::optional<std::pair<Term, Term>> inconsistency; // p / -p witness
};

struct SolveOptions {
  int64_t maxModels = 1; // 0 = no cap
  bool optimize = false;
  int64_t timeoutMs = 0; // 0 = no budget
};

/// Stable-model search: unit propagation on rule completion plus
/// well-founded derivation for positive loops, chronological backtracking
/// on undecided atoms (atom-id ascending, positive branch first), candidate
/// verification via checkStability, and branch-and-bound lexicographic
/// optimization when optimize is set. Throws SolveError on timeout,
/// reporting the best-known cost.
SolveResult solve(const GroundProgram& gp, const SolveOptions& opts = {});

/// True iff `candidate` (indexed by atom id) is a stable model: a minimal
/// model of the reduct w.r.t. the candidate, with choice rules and
/// aggregates under their standard stable semantics. Total function.
bool checkStability(const GroundProgram& gp, const std::vector<bool>& candidate);
bool checkStability(const GroundProgram& gp, const std::set<Term>& candidate);

/// Cost vector of a candidate under the program's weak constraints:
/// each distinct (level, terms, weight) tuple with a satisfied body
/// contributes its weight once.
CostVector evalCost(const GroundProgram& gp, const std::vector<bool>& candidate);

} // namespace aspen::asp

#endif
