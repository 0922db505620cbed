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

#ifndef ASPEN_ASP_GROUNDER_H
#define ASPEN_ASP_GROUNDER_H

#include "aspen/asp/ground_program.h"

namespace aspen::asp {

/// Bottom-up instantiation restricted to derivable atoms. Body literals are
/// reordered so every variable is bound before builtins/negation are
/// evaluated; "X = lo..hi" and solvable arithmetic equalities bind their
/// variable; intervals expand to their members; rules whose bodies can never
/// be satisfied are dropped. Throws GroundError when the ground-rule cap is
/// exceeded (naming the rule) or on non-groundable constructs.
GroundProgram ground(const Program& program, const GroundOptions& opts = {});

} // namespace aspen::asp

#endif
