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

#include <algorithm>
#include <set>

#include "aspen/asp/parser.h"
#include "aspen/kb/modules.h"

namespace aspen::kb {
namespace {

std::string predKey(const asp::Term& atom) {
  size_t arity = atom.kind == asp::TermKind::Compound ? atom.args.size() : 0;
  return atom.text + "/" + std::to_string(arity);
}

void collectPreds(const asp::Literal& l, std::set<std::string>& out) {
  if (!l.builtin) out.insert(predKey(l.atom));
}

// Every predicate mentioned anywhere in a rule (heads, bodies, conditions).
void collectPreds(const asp::Rule& r, std::set<std::string>& out) {
  for (const asp::Literal& h : r.head) collectPreds(h, out);
  for (const asp::BodyElement& e : r.body) {
    if (auto* l = std::get_if<asp::Literal>(&e)) collectPreds(*l, out);
    else if (auto* c = std::get_if<asp::ConditionalLiteral>(&e)) {
      collectPreds(c->head, out);
      for (const asp::Literal& x : c->condition) collectPreds(x, out);
    } else if (auto* a = std::get_if<asp::Aggregate>(&e)) {
      for (const asp::AggregateElement& el : a->elements)
        for (const asp::Literal& x : el.condition) collectPreds(x, out);
    }
  }
  for (const asp::ChoiceElement& el : r.choice.elements) {
    collectPreds(el.lit, out);
    for (const asp::Literal& x : el.condition) collectPreds(x, out);
  }
}

} // namespace

asp::GroundOptions taskGroundOptions(const std::string& task) {
  asp::GroundOptions opts;
  opts.eliminateDeadRules = true;
  opts.keepPredicates = {"answer", "happens"};
  (void)task;
  return opts;
}

Composition compose(const std::string& task, const nlp::FactSet& facts, const Registry& reg) {
  const TaskProfile& profile = profileFor(task);
  Composition out;

  std::vector<std::string> order = reg.closure(profile.modules);
  std::string text;
  for (const std::string& name : order) {
    text += "% module: " + name + "\n";
    text += reg.get(name).text;
    text += "\n";
  }

  // Timestamping policy.
  std::set<std::string> stamped(profile.stampedPredicates.begin(),
                                profile.stampedPredicates.end());
  int horizon = -1;
  std::string factText = "% facts\n";
  for (const nlp::Fact& f : facts.facts()) {
    if (f.unmatched) continue;
    asp::Term atom = f.atom;
    if (profile.stamping == Timestamping::SentenceIndex && stamped.count(atom.text)) {
      int idx = f.sentence < 0 ? 0 : f.sentence;
      if (atom.kind == asp::TermKind::Symbol) atom = asp::Term::compound(atom.text, {});
      atom.args.push_back(asp::Term::number(idx));
      horizon = std::max(horizon, idx);
    }
    if (profile.stamping == Timestamping::ParserSupplied && !atom.args.empty() &&
        atom.args.back().kind == asp::TermKind::Number) {
      horizon = std::max(horizon, static_cast<int>(atom.args.back().num));
    }
    factText += atom.toString() + ".\n";
  }
  if (profile.stamping == Timestamping::SentenceIndex ||
      profile.stamping == Timestamping::ParserSupplied) {
    int sentences = facts.maxSentence();
    int h = std::max(horizon, sentences) + 1;
    if (h < 1) h = 1;
    factText += "maxtime(" + std::to_string(h) + ").\n";
  }
  text += factText;

  out.program = asp::parseProgram(text, task);
  out.text = std::move(text);

  // Warn about fact predicates no module mentions.
  std::set<std::string> known;
  for (const std::string& name : order) {
    asp::Program mp = asp::parseProgram(reg.get(name).text, name);
    for (const asp::Rule& r : mp.rules) collectPreds(r, known);
  }
  std::set<std::string> warned;
  for (const nlp::Fact& f : facts.facts()) {
    if (f.unmatched) continue;
    asp::Term atom = f.atom;
    size_t baseArity = atom.kind == asp::TermKind::Compound ? atom.args.size() : 0;
    std::string k1 = atom.text + "/" + std::to_string(baseArity);
    std::string k2 = atom.text + "/" + std::to_string(baseArity + 1); // stamped form
    if (!known.count(k1) && !known.count(k2) && !warned.count(k1)) {
      warned.insert(k1);
      out.warnings.push_back("fact predicate " + k1 + " unknown to modules of " + task);
    }
  }
  return out;
}

} // namespace aspen::kb
