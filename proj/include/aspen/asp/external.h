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

#ifndef ASPEN_ASP_EXTERNAL_H
#define ASPEN_ASP_EXTERNAL_H

#include <string>

#include "aspen/asp/solver.h"

namespace aspen::asp {

struct ExternalError : std::runtime_error {
  explicit ExternalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Runs `solverCmd` as a subprocess with the program on standard input and
/// model-count/optimization flags appended, and parses clingo-style output
/// (one atom list per "Answer:" line plus "Optimization:" cost lines) into a
/// SolveResult with the same shape as solve(). Throws ExternalError on
/// missing solver, abnormal exit, or unparseable output.
SolveResult solveExternal(const std::string& programText, const std::string& solverCmd,
                          const SolveOptions& opts = {});

/// First conformant solver found on PATH ("" when none); used by the
/// differential tests to skip gracefully.
std::string findExternalSolver();

} // namespace aspen::asp

#endif
