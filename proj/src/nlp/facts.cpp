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

#include "aspen/nlp/facts.h"

#include <algorithm>

namespace aspen::nlp {

bool FactSet::insert(asp::Term atom, int sentence, std::string span) {
  if (!seen_.insert(atom).second) return false;
  Fact f;
  f.atom = std::move(atom);
  f.sentence = sentence;
  f.span = std::move(span);
  facts_.push_back(std::move(f));
  return true;
}

void FactSet::markUnmatched(int sentence, std::string span) {
  Fact f;
  f.atom = asp::Term::symbol("'unmatched");
  f.sentence = sentence;
  f.span = std::move(span);
  f.unmatched = true;
  facts_.push_back(std::move(f));
}

void FactSet::merge(const FactSet& other) {
  for (const Fact& f : other.facts_) {
    if (f.unmatched) facts_.push_back(f);
    else insert(f.atom, f.sentence, f.span);
  }
}

int FactSet::maxSentence() const {
  int m = -1;
  for (const Fact& f : facts_) m = std::max(m, f.sentence);
  return m;
}

std::vector<Fact> FactSet::unmatched() const {
  std::vector<Fact> out;
  for (const Fact& f : facts_)
    if (f.unmatched) out.push_back(f);
  return out;
}

std::string FactSet::toText() const {
  std::string out;
  for (const Fact& f : facts_) {
    if (f.unmatched) continue;
    out += f.atom.toString();
    out += ".\n";
  }
  return out;
}

bool FactSet::operator==(const FactSet& other) const {
  std::vector<std::string> a, b;
  for (const Fact& f : facts_)
    if (!f.unmatched) a.push_back(f.atom.toString());
  for (const Fact& f : other.facts_)
    if (!f.unmatched) b.push_back(f.atom.toString());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

} // namespace aspen::nlp
