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

#ifndef ASPEN_ASP_PARSER_H
#define ASPEN_ASP_PARSER_H

#include <string>

#include "aspen/asp/program.h"

namespace aspen::asp {

/// Parses `text` in the supported input-language subset. Pooling in fact
/// heads ("p(a,1; b,2).") is expanded here; "%" line and "%*...*%" block
/// comments are stripped. Throws ParseError with line/column on syntax
/// errors, unsupported constructs (named explicitly) and safety violations.
Program parseProgram(const std::string& text, const std::string& name = "");

/// Parses a single ground atom like `go(mary,bathroom)`. Throws ParseError.
Term parseGroundAtom(const std::string& text);

} // namespace aspen::asp

#endif
