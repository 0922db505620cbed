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

#ifndef ASPEN_KB_MODULES_H
#define ASPEN_KB_MODULES_H

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aspen/asp/program.h"
#include "aspen/asp/solver.h"
#include "aspen/nlp/facts.h"

namespace aspen::kb {

/// A reusable ASP rule bundle stored as a data asset on disk.
struct KnowledgeModule {
  std::string name;
  std::string text; // byte-stable across calls
  std::vector<std::string> deps;
};

/// Loads modules from the manifest file (name -> path -> dependencies).
/// The registry is immutable after construction.
class Registry {
public:
  explicit Registry(const std::string& assetDir);

  /// Throws std::out_of_range for unknown module names.
  const KnowledgeModule& get(const std::string& name) const;
  bool has(const std::string& name) const { return modules_.count(name) > 0; }
  std::vector<std::string> names() const;

  /// Dependency closure of `roots` in composition order (dependencies first,
  /// stable, duplicates removed).
  std::vector<std::string> closure(const std::vector<std::string>& roots) const;

  static const Registry& instance(); // default asset directory

private:
  std::map<std::string, KnowledgeModule> modules_;
  std::vector<std::string> order_;
};

enum class Timestamping { None, SentenceIndex, ParserSupplied };
enum class ExtractionRule {
  SingleLabel,
  YesNoMaybe,
  CountWord,
  ItemSet,
  DirectionLabel,
  RelationLabel,
  ActionSequence
};
enum class ParseMode { PerSentence, WholeStory };

/// Per-benchmark bundle of knowledge modules, timestamping policy and
/// answer extraction rule.
struct TaskProfile {
  std::string task;
  std::vector<std::string> modules; // glue last; closure computed at compose
  Timestamping stamping = Timestamping::None;
  ExtractionRule extraction = ExtractionRule::SingleLabel;
  ParseMode parseMode = ParseMode::PerSentence;
  std::vector<std::string> answerPredicates = {"answer"};
  std::vector<std::string> stampedPredicates; // event predicates gaining a time arg
  int64_t solveTimeoutMs = 20000;
};

/// Profile for a task id like "babi_3", "stepgame", "clutrr", "gscan",
/// "pickplace". Throws std::out_of_range for unknown ids.
const TaskProfile& profileFor(const std::string& task);
std::vector<std::string> allTasks();

struct Composition {
  asp::Program program;
  std::string text;
  std::vector<std::string> warnings; // facts over predicates unknown to the modules
};

/// Concatenates the profile's modules, glue and (timestamped) facts into a
/// runnable program.
Composition compose(const std::string& task, const nlp::FactSet& facts,
                    const Registry& reg = Registry::instance());

/// Grounding options for composed task programs: dead-rule elimination with
/// the extraction predicates kept.
asp::GroundOptions taskGroundOptions(const std::string& task);

/// One answer read back out of a solve result.
struct Answer {
  enum class Kind { Label, LabelSet, ActionSequence, Unknown };
  Kind kind = Kind::Unknown;
  std::string label;                  // single-label style answers, surface form
  std::set<std::string> labels;       // item sets
  std::vector<asp::Term> actions;     // time-ordered action terms
  std::string surface;                // rendered per task convention
  bool abstain = false;               // UNSAT or no answer atom
  bool ambiguous = false;             // conflicting answer atoms
};

/// Reads the profile's designated predicates from the first (optimal) answer
/// set and renders the benchmark's surface vocabulary.
Answer extractAnswer(const std::string& task, const asp::SolveResult& result);

/// Maps an engine-side direction label to the dataset's surface vocabulary.
std::string stepgameSurfaceLabel(const std::string& engineLabel);

struct ValidationIssue {
  std::string module;
  std::string severity; // "error" | "warning" | "info"
  std::string message;
};

/// Parses every registered module with its dependency closure, checks
/// safety and per-predicate arity usage, and verifies each task glue's
/// answer predicate fires on a canned smoke fact set.
std::vector<ValidationIssue> validateModules(const Registry& reg = Registry::instance());

} // namespace aspen::kb

#endif
