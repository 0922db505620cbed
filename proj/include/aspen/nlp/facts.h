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

#ifndef ASPEN_NLP_FACTS_H
#define ASPEN_NLP_FACTS_H

#include <string>
#include <unordered_set>
#include <vector>

#include "aspen/asp/term.h"

namespace aspen::nlp {

/// One extracted ground atom with provenance: the source sentence index and
/// the raw response span it was read from.
struct Fact {
  asp::Term atom;
  int sentence = -1;
  std::string span;
  bool unmatched = false; // oracle had no template for the sentence
};

/// Set of ground atoms: duplicates collapse (first provenance wins),
/// insertion order is preserved.
class FactSet {
public:
  bool insert(asp::Term atom, int sentence = -1, std::string span = "");
  void markUnmatched(int sentence, std::string span);
  void merge(const FactSet& other);

  bool contains(const asp::Term& atom) const { return seen_.count(atom) > 0; }
  const std::vector<Fact>& facts() const { return facts_; }
  bool empty() const { return facts_.empty(); }
  size_t size() const { return facts_.size(); }
  int maxSentence() const;
  std::vector<Fact> unmatched() const;

  /// Atoms rendered one per line, "atom." each.
  std::string toText() const;

  bool operator==(const FactSet& other) const;

private:
  std::vector<Fact> facts_;
  std::unordered_set<asp::Term, asp::TermHash> seen_;
};

} // namespace aspen::nlp

#endif
