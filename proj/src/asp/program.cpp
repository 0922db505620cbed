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

#include "aspen/asp/program.h"

#include <sstream>

namespace aspen::asp {

const char* relText(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Neq: return "!=";
    case Rel::Lt: return "<";
    case Rel::Leq: return "<=";
    case Rel::Gt: return ">";
    case Rel::Geq: return ">=";
  }
  return "?";
}

bool relHolds(Rel r, int64_t lhs, int64_t rhs) {
  switch (r) {
    case Rel::Eq: return lhs == rhs;
    case Rel::Neq: return lhs != rhs;
    case Rel::Lt: return lhs < rhs;
    case Rel::Leq: return lhs <= rhs;
    case Rel::Gt: return lhs > rhs;
    case Rel::Geq: return lhs >= rhs;
  }
  return false;
}

bool relHolds(Rel r, const Term& lhs, const Term& rhs) {
  int c = compareTerms(lhs, rhs);
  switch (r) {
    case Rel::Eq: return c == 0;
    case Rel::Neq: return c != 0;
    case Rel::Lt: return c < 0;
    case Rel::Leq: return c <= 0;
    case Rel::Gt: return c > 0;
    case Rel::Geq: return c >= 0;
  }
  return false;
}

Literal Literal::fromAtom(Term a, bool strongNeg, bool defaultNeg) {
  Literal l;
  l.atom = std::move(a);
  l.strongNeg = strongNeg;
  l.defaultNeg = defaultNeg;
  return l;
}

Literal Literal::comparison(Term l, Rel r, Term rh, bool defaultNeg) {
  Literal lit;
  lit.builtin = true;
  lit.lhs = std::move(l);
  lit.rel = r;
  lit.rhs = std::move(rh);
  lit.defaultNeg = defaultNeg;
  return lit;
}

std::string Literal::toString() const {
  std::string s;
  if (defaultNeg) s += "not ";
  if (builtin) {
    s += lhs.toString();
    s += relText(rel);
    s += rhs.toString();
  } else {
    if (strongNeg) s += "-";
    s += atom.toString();
  }
  return s;
}

std::string ConditionalLiteral::toString() const {
  std::string s = head.toString();
  if (!condition.empty()) {
    s += ": ";
    for (size_t i = 0; i < condition.size(); ++i) {
      if (i) s += ", ";
      s += condition[i].toString();
    }
  }
  return s;
}

std::string Aggregate::toString() const {
  std::string s;
  if (leftGuard) {
    s += leftGuard->second.toString();
    s += relText(leftGuard->first);
  }
  s += "#count{";
  for (size_t i = 0; i < elements.size(); ++i) {
    if (i) s += "; ";
    for (size_t j = 0; j < elements[i].tuple.size(); ++j) {
      if (j) s += ",";
      s += elements[i].tuple[j].toString();
    }
    if (!elements[i].condition.empty()) {
      s += ": ";
      for (size_t j = 0; j < elements[i].condition.size(); ++j) {
        if (j) s += ", ";
        s += elements[i].condition[j].toString();
      }
    }
  }
  s += "}";
  if (rightGuard) {
    s += relText(rightGuard->first);
    s += rightGuard->second.toString();
  }
  return s;
}

std::string toString(const BodyElement& e) {
  if (auto* l = std::get_if<Literal>(&e)) return l->toString();
  if (auto* c = std::get_if<ConditionalLiteral>(&e)) return c->toString();
  return std::get<Aggregate>(e).toString();
}

std::string Rule::toString() const {
  std::ostringstream os;
  auto printBody = [&] {
    for (size_t i = 0; i < body.size(); ++i) {
      if (i) os << "; ";
      os << asp::toString(body[i]);
    }
  };
  switch (kind) {
    case RuleKind::Basic: {
      for (size_t i = 0; i < head.size(); ++i) {
        if (i) os << "; ";
        os << head[i].toString();
      }
      if (!body.empty()) {
        os << " :- ";
        printBody();
      }
      os << ".";
      break;
    }
    case RuleKind::Choice: {
      if (choice.lower) os << choice.lower->toString() << " ";
      os << "{";
      for (size_t i = 0; i < choice.elements.size(); ++i) {
        if (i) os << "; ";
        os << choice.elements[i].lit.toString();
        for (size_t j = 0; j < choice.elements[i].condition.size(); ++j)
          os << (j ? ", " : ": ") << choice.elements[i].condition[j].toString();
      }
      os << "}";
      if (choice.upper) os << " " << choice.upper->toString();
      if (choice.exact) os << " = " << choice.exact->toString();
      if (!body.empty()) {
        os << " :- ";
        printBody();
      }
      os << ".";
      break;
    }
    case RuleKind::Constraint: {
      os << ":- ";
      printBody();
      os << ".";
      break;
    }
    case RuleKind::Weak: {
      os << ":~ ";
      printBody();
      os << ". [" << weight.toString() << "@" << level.toString();
      for (const Term& t : tuple) os << ", " << t.toString();
      os << "]";
      break;
    }
  }
  return os.str();
}

std::string Program::toString() const {
  std::string s;
  for (const auto& [k, v] : constants) s += "#const " + k + "=" + v.toString() + ".\n";
  for (const Rule& r : rules) {
    s += r.toString();
    s += "\n";
  }
  return s;
}

} // namespace aspen::asp
