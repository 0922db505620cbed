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

#include "aspen/asp/term.h"

#include <functional>
#include <sstream>

namespace aspen::asp {

Term Term::number(int64_t v) {
  Term t;
  t.kind = TermKind::Number;
  t.num = v;
  return t;
}

Term Term::symbol(std::string name) {
  Term t;
  t.kind = TermKind::Symbol;
  t.text = std::move(name);
  return t;
}

Term Term::string(std::string content) {
  Term t;
  t.kind = TermKind::String;
  t.text = std::move(content);
  return t;
}

Term Term::variable(std::string name, bool anonymous) {
  Term t;
  t.kind = TermKind::Variable;
  t.text = std::move(name);
  t.anonymous = anonymous;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  Term t;
  t.kind = TermKind::Compound;
  t.text = std::move(functor);
  t.args = std::move(args);
  return t;
}

Term Term::tuple(std::vector<Term> args) { return compound("", std::move(args)); }

Term Term::interval(Term lo, Term hi) {
  Term t;
  t.kind = TermKind::Interval;
  t.args.push_back(std::move(lo));
  t.args.push_back(std::move(hi));
  return t;
}

Term Term::binary(ArithOp op, Term lhs, Term rhs) {
  Term t;
  t.kind = TermKind::Binary;
  t.op = op;
  t.args.push_back(std::move(lhs));
  t.args.push_back(std::move(rhs));
  return t;
}

Term Term::unary(ArithOp op, Term arg) {
  Term t;
  t.kind = TermKind::Unary;
  t.op = op;
  t.args.push_back(std::move(arg));
  return t;
}

bool Term::isGround() const {
  switch (kind) {
    case TermKind::Number:
    case TermKind::Symbol:
    case TermKind::String:
      return true;
    case TermKind::Variable:
    case TermKind::Interval:
    case TermKind::Binary:
    case TermKind::Unary:
      return false;
    case TermKind::Compound:
      for (const Term& a : args)
        if (!a.isGround()) return false;
      return true;
  }
  return false;
}

bool Term::hasVariables() const {
  if (kind == TermKind::Variable) return true;
  for (const Term& a : args)
    if (a.hasVariables()) return true;
  return false;
}

static void appendString(std::string& out, const Term& t) {
  switch (t.kind) {
    case TermKind::Number:
      out += std::to_string(t.num);
      break;
    case TermKind::Symbol:
    case TermKind::Variable:
      out += t.text;
      break;
    case TermKind::String: {
      out += '"';
      for (char c : t.text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      break;
    }
    case TermKind::Compound: {
      out += t.text;
      if (!t.args.empty() || t.text.empty()) {
        out += '(';
        for (size_t i = 0; i < t.args.size(); ++i) {
          if (i) out += ',';
          appendString(out, t.args[i]);
        }
        out += ')';
      }
      break;
    }
    case TermKind::Interval:
      appendString(out, t.args[0]);
      out += "..";
      appendString(out, t.args[1]);
      break;
    case TermKind::Binary: {
      out += '(';
      appendString(out, t.args[0]);
      out += t.op == ArithOp::Add ? "+" : t.op == ArithOp::Sub ? "-" : "*";
      appendString(out, t.args[1]);
      out += ')';
      break;
    }
    case TermKind::Unary: {
      if (t.op == ArithOp::Abs) {
        out += '|';
        appendString(out, t.args[0]);
        out += '|';
      } else {
        out += '-';
        appendString(out, t.args[0]);
      }
      break;
    }
  }
}

std::string Term::toString() const {
  std::string out;
  appendString(out, *this);
  return out;
}

bool Term::operator==(const Term& other) const { return compareTerms(*this, other) == 0; }

bool Term::operator<(const Term& other) const { return compareTerms(*this, other) < 0; }

static int kindRank(TermKind k) {
  switch (k) {
    case TermKind::Number: return 0;
    case TermKind::Symbol: return 1;
    case TermKind::String: return 2;
    case TermKind::Compound: return 3;
    case TermKind::Variable: return 4;
    case TermKind::Interval: return 5;
    case TermKind::Binary: return 6;
    case TermKind::Unary: return 7;
  }
  return 8;
}

int compareTerms(const Term& a, const Term& b) {
  if (a.kind != b.kind) return kindRank(a.kind) < kindRank(b.kind) ? -1 : 1;
  switch (a.kind) {
    case TermKind::Number:
      return a.num < b.num ? -1 : a.num > b.num ? 1 : 0;
    case TermKind::Symbol:
    case TermKind::String:
    case TermKind::Variable:
      return a.text.compare(b.text) < 0 ? -1 : a.text == b.text ? 0 : 1;
    default:
      break;
  }
  if (a.kind == TermKind::Compound) {
    if (int c = a.text.compare(b.text); c != 0) return c < 0 ? -1 : 1;
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  }
  if (a.kind == TermKind::Binary || a.kind == TermKind::Unary) {
    if (a.op != b.op) return static_cast<int>(a.op) < static_cast<int>(b.op) ? -1 : 1;
  }
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (int c = compareTerms(a.args[i], b.args[i]); c != 0) return c;
  }
  return 0;
}

size_t Term::hash() const {
  size_t h = static_cast<size_t>(kind) * 0x9e3779b97f4a7c15ull;
  auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  switch (kind) {
    case TermKind::Number:
      mix(std::hash<int64_t>{}(num));
      break;
    case TermKind::Binary:
    case TermKind::Unary:
      mix(static_cast<size_t>(op));
      break;
    default:
      mix(std::hash<std::string>{}(text));
      break;
  }
  for (const Term& a : args) mix(a.hash());
  return h;
}

} // namespace aspen::asp
