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

#include "aspen/asp/grounder.h"

#include <chrono>
#include <cstdlib>

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <unordered_set>

namespace aspen::asp {
namespace {

using Binding = std::unordered_map<std::string, Term>;

Term substituteConsts(const Term& t, const std::map<std::string, Term>& consts) {
  switch (t.kind) {
    case TermKind::Symbol: {
      auto it = consts.find(t.text);
      return it == consts.end() ? t : it->second;
    }
    case TermKind::Compound:
    case TermKind::Interval:
    case TermKind::Binary:
    case TermKind::Unary: {
      Term out = t;
      for (Term& a : out.args) a = substituteConsts(a, consts);
      return out;
    }
    default:
      return t;
  }
}

/// Atom term for a literal, folding strong negation into a "-"-prefixed
/// predicate name so p and -p form distinct predicate families.
Term atomTerm(const Literal& l) {
  Term t = l.atom;
  if (l.strongNeg) {
    if (t.kind == TermKind::Symbol) t.text = "-" + t.text;
    else t.text = "-" + t.text;
  }
  return t;
}

std::string predKeyOf(const Term& atom) {
  if (atom.kind == TermKind::Symbol) return atom.text + "/0";
  return atom.text + "/" + std::to_string(atom.args.size());
}

bool containsUnboundArith(const Term& t, const Binding& b) {
  switch (t.kind) {
    case TermKind::Variable:
      return false; // plain variables bind by matching
    case TermKind::Interval:
    case TermKind::Binary:
    case TermKind::Unary: {
      std::function<bool(const Term&)> anyUnbound = [&](const Term& x) {
        if (x.kind == TermKind::Variable) return !b.count(x.text);
        for (const Term& a : x.args)
          if (anyUnbound(a)) return true;
        return false;
      };
      return anyUnbound(t);
    }
    case TermKind::Compound:
      for (const Term& a : t.args)
        if (containsUnboundArith(a, b)) return true;
      return false;
    default:
      return false;
  }
}

void collectVarsOf(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Variable) out.insert(t.text);
  for (const Term& a : t.args) collectVarsOf(a, out);
}

void collectVarsOf(const Literal& l, std::set<std::string>& out) {
  if (l.builtin) {
    collectVarsOf(l.lhs, out);
    collectVarsOf(l.rhs, out);
  } else {
    collectVarsOf(l.atom, out);
  }
}

bool allBound(const std::set<std::string>& vars, const Binding& b) {
  for (const auto& v : vars)
    if (!b.count(v)) return false;
  return true;
}

class Grounder {
public:
  Grounder(const Program& program, const GroundOptions& opts) : opts_(opts) {
    std::map<std::string, Term> consts = program.constants;
    for (const auto& [k, v] : opts.constantBindings) consts[k] = v; // overrides win
    for (const Rule& r : program.rules) {
      Rule c = r;
      auto subLit = [&](Literal& l) {
        if (l.builtin) {
          l.lhs = substituteConsts(l.lhs, consts);
          l.rhs = substituteConsts(l.rhs, consts);
        } else {
          l.atom = substituteConsts(l.atom, consts);
        }
      };
      for (Literal& h : c.head) subLit(h);
      for (BodyElement& e : c.body) {
        if (auto* l = std::get_if<Literal>(&e)) subLit(*l);
        else if (auto* cl = std::get_if<ConditionalLiteral>(&e)) {
          subLit(cl->head);
          for (Literal& x : cl->condition) subLit(x);
        } else if (auto* a = std::get_if<Aggregate>(&e)) {
          for (AggregateElement& el : a->elements) {
            for (Term& t : el.tuple) t = substituteConsts(t, consts);
            for (Literal& x : el.condition) subLit(x);
          }
          if (a->leftGuard) a->leftGuard->second = substituteConsts(a->leftGuard->second, consts);
          if (a->rightGuard) a->rightGuard->second = substituteConsts(a->rightGuard->second, consts);
        }
      }
      for (ChoiceElement& el : c.choice.elements) {
        subLit(el.lit);
        for (Literal& x : el.condition) subLit(x);
      }
      if (c.choice.lower) *c.choice.lower = substituteConsts(*c.choice.lower, consts);
      if (c.choice.upper) *c.choice.upper = substituteConsts(*c.choice.upper, consts);
      if (c.choice.exact) *c.choice.exact = substituteConsts(*c.choice.exact, consts);
      c.weight = substituteConsts(c.weight, consts);
      c.level = substituteConsts(c.level, consts);
      for (Term& t : c.tuple) t = substituteConsts(t, consts);
      rules_.push_back(std::move(c));
    }
    for (const Rule& r : rules_) {
      for (const Literal& h : r.head) definedPreds_.insert(predKeyOf(atomTerm(h)));
      for (const ChoiceElement& el : r.choice.elements)
        definedPreds_.insert(predKeyOf(atomTerm(el.lit)));
      // ground facts are certainly true: negatives over them prune instances
      if (r.kind == RuleKind::Basic && r.head.size() == 1 && r.body.empty()) {
        Term h = atomTerm(r.head[0]);
        if (h.isGround()) {
          std::vector<Term> expanded;
          expandIntervals(h, expanded, r.line);
          for (const Term& t : expanded) staticFacts_.insert(t);
        }
      }
    }
    if (opts_.eliminateDeadRules) eliminateDeadRules();
  }

  // Fixpoint removal of rules that can never fire (a positive body literal
  // over a predicate with no definition) and of rules defining predicates no
  // surviving rule consumes.
  void eliminateDeadRules() {
    std::set<std::string> keep = {"answer"};
    for (const auto& k : opts_.keepPredicates) keep.insert(k);
    bool changed = true;
    while (changed) {
      changed = false;
      std::set<std::string> defined;
      for (const Rule& r : rules_) {
        for (const Literal& h : r.head) defined.insert(predKeyOf(atomTerm(h)));
        for (const ChoiceElement& el : r.choice.elements)
          defined.insert(predKeyOf(atomTerm(el.lit)));
      }
      std::set<std::string> consumed;
      auto use = [&](const Literal& l) {
        if (!l.builtin) consumed.insert(predKeyOf(atomTerm(l)));
      };
      for (const Rule& r : rules_) {
        for (const BodyElement& e : r.body) {
          if (auto* l = std::get_if<Literal>(&e)) use(*l);
          else if (auto* c = std::get_if<ConditionalLiteral>(&e)) {
            use(c->head);
            for (const Literal& x : c->condition) use(x);
          } else if (auto* a = std::get_if<Aggregate>(&e)) {
            for (const AggregateElement& el : a->elements)
              for (const Literal& x : el.condition) use(x);
          }
        }
        for (const ChoiceElement& el : r.choice.elements)
          for (const Literal& x : el.condition) use(x);
      }
      std::vector<Rule> live;
      live.reserve(rules_.size());
      for (Rule& r : rules_) {
        bool dead = false;
        // a positive plain body literal over an undefined, fact-free predicate
        for (const BodyElement& e : r.body) {
          if (auto* l = std::get_if<Literal>(&e)) {
            if (!l->builtin && !l->defaultNeg && !defined.count(predKeyOf(atomTerm(*l))))
              dead = true;
          }
        }
        // a basic rule whose head nobody consumes
        if (!dead && r.kind == RuleKind::Basic && r.head.size() == 1 && !r.body.empty()) {
          std::string hk = predKeyOf(atomTerm(r.head[0]));
          std::string name = r.head[0].atom.text;
          if (!consumed.count(hk) && !keep.count(name) && name[0] != '-') dead = true;
        }
        if (dead) changed = true;
        else live.push_back(std::move(r));
      }
      rules_ = std::move(live);
    }
  }

  GroundProgram run() {
    out_.atoms.push_back(Term::symbol("'false")); // ids are 1-based
    out_.fact.push_back(false);
    out_.internal.push_back(false);
    if (opts_.naive) collectHerbrand();
    auto t0 = std::chrono::steady_clock::now();
    computePossible();
    auto t1 = std::chrono::steady_clock::now();
    auto t2 = t1;
    emitRules();
    auto t3 = std::chrono::steady_clock::now();
    finalize();
    if (std::getenv("ASPEN_GROUND_TIMING")) {
      auto ms = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
      };
      fprintf(stderr, "[ground] possible=%ldms certain=%ldms emit=%ldms\n",
              (long)ms(t0, t1), (long)ms(t1, t2), (long)ms(t2, t3));
    }
    return std::move(out_);
  }

private:
  // --- term evaluation ----------------------------------------------------

  [[noreturn]] void err(const std::string& msg, int line) {
    throw GroundError(msg + " (rule at line " + std::to_string(line) + ")");
  }

  // Substitutes the binding and folds arithmetic. Interval nodes survive with
  // evaluated bounds. Returns nullopt if an unbound variable remains.
  std::optional<Term> evalTerm(const Term& t, const Binding& b, int line) {
    switch (t.kind) {
      case TermKind::Number:
      case TermKind::Symbol:
      case TermKind::String:
        return t;
      case TermKind::Variable: {
        auto it = b.find(t.text);
        if (it == b.end()) return std::nullopt;
        return it->second;
      }
      case TermKind::Compound: {
        Term out = t;
        for (Term& a : out.args) {
          auto v = evalTerm(a, b, line);
          if (!v) return std::nullopt;
          a = *v;
        }
        return out;
      }
      case TermKind::Interval: {
        auto lo = evalTerm(t.args[0], b, line);
        auto hi = evalTerm(t.args[1], b, line);
        if (!lo || !hi) return std::nullopt;
        if (lo->kind != TermKind::Number || hi->kind != TermKind::Number)
          err("interval bounds must be integers", line);
        return Term::interval(*lo, *hi);
      }
      case TermKind::Binary: {
        auto l = evalTerm(t.args[0], b, line);
        auto r = evalTerm(t.args[1], b, line);
        if (!l || !r) return std::nullopt;
        if (l->kind != TermKind::Number || r->kind != TermKind::Number)
          err("arithmetic over non-integer value '" +
                  (l->kind != TermKind::Number ? l->toString() : r->toString()) + "'",
              line);
        switch (t.op) {
          case ArithOp::Add: return Term::number(l->num + r->num);
          case ArithOp::Sub: return Term::number(l->num - r->num);
          case ArithOp::Mul: return Term::number(l->num * r->num);
          default: err("bad arithmetic operator", line);
        }
      }
      case TermKind::Unary: {
        auto v = evalTerm(t.args[0], b, line);
        if (!v) return std::nullopt;
        if (v->kind != TermKind::Number)
          err("arithmetic over non-integer value '" + v->toString() + "'", line);
        return Term::number(t.op == ArithOp::Abs ? (v->num < 0 ? -v->num : v->num) : -v->num);
      }
    }
    return std::nullopt;
  }

  // Expands interval nodes inside an evaluated term into all members
  // (cross product when several intervals occur).
  void expandIntervals(const Term& t, std::vector<Term>& out, int line) {
    const Term* iv = findInterval(t);
    if (!iv) {
      out.push_back(t);
      return;
    }
    if (iv->args[1].num - iv->args[0].num > 1'000'000)
      err("interval too large to expand", line);
    for (int64_t v = iv->args[0].num; v <= iv->args[1].num; ++v) {
      Term copy = t;
      replaceFirstInterval(copy, Term::number(v));
      expandIntervals(copy, out, line);
    }
  }

  static const Term* findInterval(const Term& t) {
    if (t.kind == TermKind::Interval) return &t;
    for (const Term& a : t.args)
      if (const Term* r = findInterval(a)) return r;
    return nullptr;
  }

  static bool replaceFirstInterval(Term& t, const Term& value) {
    if (t.kind == TermKind::Interval) {
      t = value;
      return true;
    }
    for (Term& a : t.args)
      if (replaceFirstInterval(a, value)) return true;
    return false;
  }

  // --- possible/certain atom stores ---------------------------------------

  struct PredStore {
    std::vector<Term> atoms; // insertion order
    std::unordered_map<Term, int, TermHash> set; // atom -> index
    // per argument position: hash-of-arg -> atom indices (built lazily)
    std::vector<std::unordered_map<size_t, std::vector<int>>> argIndex;
    size_t indexedUpTo = 0;

    void buildIndexTo(size_t n) {
      if (atoms.empty()) return;
      size_t arity = atoms[0].args.size();
      if (argIndex.size() != arity) argIndex.resize(arity);
      for (size_t i = indexedUpTo; i < n; ++i) {
        for (size_t p = 0; p < arity && p < atoms[i].args.size(); ++p)
          argIndex[p][atoms[i].args[p].hash()].push_back(static_cast<int>(i));
      }
      indexedUpTo = std::max(indexedUpTo, n);
    }
  };

  bool addPossible(const Term& atom) {
    auto& store = possible_[predKeyOf(atom)];
    if (!store.set.emplace(atom, static_cast<int>(store.atoms.size())).second) return false;
    store.atoms.push_back(atom);
    registerAtom(atom);
    return true;
  }

  bool isPossible(const Term& atom) const {
    auto it = possible_.find(predKeyOf(atom));
    return it != possible_.end() && it->second.set.count(atom);
  }

  bool isCertain(const Term& atom) const { return staticFacts_.count(atom) > 0; }

  Atom registerAtom(const Term& atom) {
    auto it = out_.atomIds.find(atom);
    if (it != out_.atomIds.end()) return it->second;
    Atom id = static_cast<Atom>(out_.atoms.size());
    out_.atoms.push_back(atom);
    out_.atomIds.emplace(atom, id);
    out_.fact.push_back(false);
    out_.internal.push_back(false);
    return id;
  }

  // --- join machinery -----------------------------------------------------

  bool matchTerm(const Term& pattern, const Term& g, Binding& b,
                 std::vector<std::string>& trail, int line) {
    switch (pattern.kind) {
      case TermKind::Variable: {
        auto it = b.find(pattern.text);
        if (it != b.end()) return it->second == g;
        b.emplace(pattern.text, g);
        trail.push_back(pattern.text);
        return true;
      }
      case TermKind::Number:
      case TermKind::Symbol:
      case TermKind::String:
        return pattern == g;
      case TermKind::Compound: {
        if (g.kind != TermKind::Compound || g.text != pattern.text ||
            g.args.size() != pattern.args.size())
          return false;
        for (size_t i = 0; i < pattern.args.size(); ++i)
          if (!matchTerm(pattern.args[i], g.args[i], b, trail, line)) return false;
        return true;
      }
      case TermKind::Interval:
        err("interval not allowed in this argument position", line);
      case TermKind::Binary:
      case TermKind::Unary: {
        auto v = evalTerm(pattern, b, line);
        if (!v) return false; // reordering should prevent this
        return *v == g;
      }
    }
    return false;
  }

  void undo(Binding& b, std::vector<std::string>& trail, size_t mark) {
    while (trail.size() > mark) {
      b.erase(trail.back());
      trail.pop_back();
    }
  }

  static bool termBound(const Term& t, const Binding& b) {
    if (t.kind == TermKind::Variable) return b.count(t.text) > 0;
    for (const Term& a : t.args)
      if (!termBound(a, b)) return false;
    return true;
  }

  // Iterates possible atoms matching `pattern` under `b`, invoking fn for
  // each successful extension of the binding.
  template <typename Fn>
  bool forEachMatch(const Term& pattern, Binding& b, int line, const Fn& fn,
                    int minIndex = 0) {
    const std::string key = predKeyOf(pattern);
    auto it = possible_.find(key);
    if (it == possible_.end()) return true;
    PredStore& store = it->second;
    if (termBound(pattern, b)) {
      auto v = evalTerm(pattern, b, line);
      if (!v) return true;
      auto hit = store.set.find(*v);
      if (hit != store.set.end() && hit->second >= minIndex) return fn();
      return true;
    }
    std::vector<std::string> trail;
    // Iterate over a snapshot index range: atoms appended during iteration
    // are picked up by later fixpoint rounds.
    size_t n = store.atoms.size();
    // Pick an indexed argument position whose pattern argument is evaluable.
    int bestPos = -1;
    Term bestKey;
    if (pattern.kind == TermKind::Compound) {
      for (size_t p = 0; p < pattern.args.size(); ++p) {
        const Term& arg = pattern.args[p];
        if (arg.kind == TermKind::Number || arg.kind == TermKind::String ||
            arg.kind == TermKind::Symbol) {
          bestPos = static_cast<int>(p);
          bestKey = arg;
          break;
        }
        if (arg.kind == TermKind::Variable) {
          auto bit = b.find(arg.text);
          if (bit != b.end()) {
            bestPos = static_cast<int>(p);
            bestKey = bit->second;
            break;
          }
        } else if (arg.isGround()) {
          bestPos = static_cast<int>(p);
          bestKey = arg;
          break;
        } else if (arg.kind != TermKind::Interval && termBound(arg, b)) {
          auto v = evalTerm(arg, b, line);
          if (v && v->kind != TermKind::Interval) {
            bestPos = static_cast<int>(p);
            bestKey = *v;
            break;
          }
        }
      }
    }
    // fn() may append atoms (vector reallocation), so work on copies
    if (bestPos >= 0 && n > 16) {
      store.buildIndexTo(n);
      auto bucketIt = store.argIndex[bestPos].find(bestKey.hash());
      if (bucketIt == store.argIndex[bestPos].end()) return true;
      std::vector<int> bucket = bucketIt->second;
      for (int i : bucket) {
        if (static_cast<size_t>(i) >= n) break;
        if (i < minIndex) continue;
        const Term& g = store.atoms[i];
        size_t mark = trail.size();
        if (matchTerm(pattern, g, b, trail, line)) {
          if (!fn()) {
            undo(b, trail, mark);
            return false;
          }
        }
        undo(b, trail, mark);
      }
      return true;
    }
    for (size_t i = static_cast<size_t>(std::max(0, minIndex)); i < n; ++i) {
      const Term& g = store.atoms[i];
      size_t mark = trail.size();
      if (matchTerm(pattern, g, b, trail, line)) {
        if (!fn()) {
          undo(b, trail, mark);
          return false;
        }
      }
      undo(b, trail, mark);
    }
    return true;
  }

  enum class BuiltinResult { True, False, NotReady };

  // Evaluates or solves a builtin under b; enumerates bindings via fn when
  // the builtin binds a variable (Eq with one unbound side / interval).
  template <typename Fn>
  BuiltinResult evalBuiltin(const Literal& l, Binding& b, int line, const Fn& fn,
                            bool* enumerated) {
    *enumerated = false;
    auto le = evalTerm(l.lhs, b, line);
    auto re = evalTerm(l.rhs, b, line);
    if (le && re) {
      bool truth;
      if (re->kind == TermKind::Interval) {
        if (l.rel != Rel::Eq) err("interval comparison requires '='", line);
        truth = le->kind == TermKind::Number && le->num >= re->args[0].num &&
                le->num <= re->args[1].num;
      } else if (le->kind == TermKind::Interval) {
        if (l.rel != Rel::Eq) err("interval comparison requires '='", line);
        truth = re->kind == TermKind::Number && re->num >= le->args[0].num &&
                re->num <= le->args[1].num;
      } else if (le->kind == TermKind::Number && re->kind == TermKind::Number) {
        truth = relHolds(l.rel, le->num, re->num);
      } else {
        truth = relHolds(l.rel, *le, *re);
      }
      if (l.defaultNeg) truth = !truth;
      return truth ? BuiltinResult::True : BuiltinResult::False;
    }
    if (l.rel != Rel::Eq || l.defaultNeg) return BuiltinResult::NotReady;
    // Try to solve for a single unbound variable.
    const Term& solveSide = le ? l.rhs : l.lhs;
    std::optional<Term> value = le ? le : re;
    if (!value) return BuiltinResult::NotReady;
    // value side is ground; solveSide contains unbound variable(s)
    if (value->kind == TermKind::Interval) {
      // X = lo..hi enumeration
      if (solveSide.kind == TermKind::Variable) {
        *enumerated = true;
        for (int64_t v = value->args[0].num; v <= value->args[1].num; ++v) {
          b[solveSide.text] = Term::number(v);
          bool cont = fn();
          b.erase(solveSide.text);
          if (!cont) return BuiltinResult::False; // aborted
        }
        return BuiltinResult::True;
      }
      return BuiltinResult::NotReady;
    }
    Term target = *value;
    const Term* expr = &solveSide;
    // Invert +,-,unary- chains around the single unbound variable.
    while (true) {
      if (expr->kind == TermKind::Variable) {
        if (b.count(expr->text)) return BuiltinResult::NotReady;
        *enumerated = true;
        b[expr->text] = target;
        bool cont = fn();
        b.erase(expr->text);
        return cont ? BuiltinResult::True : BuiltinResult::False;
      }
      if (expr->kind == TermKind::Unary && expr->op == ArithOp::Neg) {
        if (target.kind != TermKind::Number) return BuiltinResult::False;
        target = Term::number(-target.num);
        expr = &expr->args[0];
        continue;
      }
      if (expr->kind == TermKind::Binary &&
          (expr->op == ArithOp::Add || expr->op == ArithOp::Sub)) {
        auto a = evalTerm(expr->args[0], b, line);
        auto c = evalTerm(expr->args[1], b, line);
        if (target.kind != TermKind::Number) return BuiltinResult::False;
        if (a && !c) {
          if (a->kind != TermKind::Number) return BuiltinResult::False;
          target = Term::number(expr->op == ArithOp::Add ? target.num - a->num
                                                         : a->num - target.num);
          expr = &expr->args[1];
          continue;
        }
        if (!a && c) {
          if (c->kind != TermKind::Number) return BuiltinResult::False;
          target = Term::number(expr->op == ArithOp::Add ? target.num - c->num
                                                         : target.num + c->num);
          expr = &expr->args[0];
          continue;
        }
        return BuiltinResult::NotReady;
      }
      if (expr->kind == TermKind::Compound) {
        // structural: f(...) = ground  -> match
        if (target.kind != TermKind::Compound || target.text != expr->text ||
            target.args.size() != expr->args.size())
          return BuiltinResult::False;
        // solve the single unbound argument
        for (size_t i = 0; i < expr->args.size(); ++i) {
          auto ai = evalTerm(expr->args[i], b, line);
          if (ai) {
            if (*ai != target.args[i]) return BuiltinResult::False;
          } else {
            Term sub = target.args[i];
            Term newTarget = sub;
            target = newTarget;
            expr = &expr->args[i];
            goto outer;
          }
        }
        return BuiltinResult::True;
      outer:
        continue;
      }
      return BuiltinResult::NotReady;
    }
  }

  // Generic join over body parts. `parts` get scheduled greedily; `leaf` is
  // called with the full binding. passA limits which parts participate.
  struct Part {
    enum Kind { Pos, Neg, Builtin, Cond, Agg } kind;
    const Literal* lit = nullptr;
    const ConditionalLiteral* cond = nullptr;
    const Aggregate* agg = nullptr;
    bool done = false;
    bool varsComputed = false;
    int minIndex = 0; // semi-naive delta window start
    std::vector<std::string> vars;        // non-anonymous variables of the part
    std::vector<std::string> lvars, rvars; // builtin sides
    std::string predKey;                  // Pos/Neg: predicate store key
  };

  static Part makeLitPart(const Literal* l) {
    Part p;
    p.lit = l;
    p.kind = l->builtin ? Part::Builtin : (l->defaultNeg ? Part::Neg : Part::Pos);
    p.varsComputed = true;
    std::set<std::string> vs;
    collectVarsOf(*l, vs);
    for (const auto& v : vs)
      if (v.back() != '#') p.vars.push_back(v);
    if (l->builtin) {
      std::set<std::string> lv, rv;
      collectVarsOf(l->lhs, lv);
      collectVarsOf(l->rhs, rv);
      p.lvars.assign(lv.begin(), lv.end());
      p.rvars.assign(rv.begin(), rv.end());
    } else {
      p.predKey = predKeyOf(atomTerm(*l));
    }
    return p;
  }

  static bool allBoundVec(const std::vector<std::string>& vars, const Binding& b) {
    for (const auto& v : vars)
      if (!b.count(v)) return false;
    return true;
  }

  // True when the equality binds exactly one still-unbound variable that is
  // isolatable through +, -, unary minus or structural matching (or an
  // "X = lo..hi" enumeration).
  static bool builtinSolvableFast(const Part& p, const Binding& b) {
    const Literal& l = *p.lit;
    if (l.rel != Rel::Eq || l.defaultNeg) return false;
    bool lb = allBoundVec(p.lvars, b), rb = allBoundVec(p.rvars, b);
    if (lb == rb) return false;
    const Term& side = lb ? l.rhs : l.lhs;
    std::string var;
    int unboundCount = 0;
    for (const auto& v : (lb ? p.rvars : p.lvars))
      if (!b.count(v)) {
        ++unboundCount;
        var = v;
      }
    if (unboundCount != 1) return false;
    std::function<bool(const Term&)> contains = [&](const Term& t) {
      if (t.kind == TermKind::Variable) return t.text == var;
      for (const Term& a : t.args)
        if (contains(a)) return true;
      return false;
    };
    std::function<bool(const Term&)> isolatable = [&](const Term& t) -> bool {
      if (t.kind == TermKind::Variable) return t.text == var;
      if (t.kind == TermKind::Unary && t.op == ArithOp::Neg) return isolatable(t.args[0]);
      if (t.kind == TermKind::Binary && (t.op == ArithOp::Add || t.op == ArithOp::Sub)) {
        bool inL = contains(t.args[0]), inR = contains(t.args[1]);
        if (inL == inR) return false;
        return isolatable(t.args[inL ? 0 : 1]);
      }
      if (t.kind == TermKind::Compound) {
        int hit = -1;
        for (size_t i = 0; i < t.args.size(); ++i)
          if (contains(t.args[i])) {
            if (hit >= 0) return false;
            hit = static_cast<int>(i);
          }
        return hit >= 0 && isolatable(t.args[hit]);
      }
      return false;
    };
    return isolatable(side);
  }

  template <typename Leaf>
  void joinParts(std::vector<Part>& parts, Binding& b, int line, bool passA,
                 const Leaf& leaf) {
    // pick next schedulable part
    int best = -1;
    double bestCost = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
      Part& p = parts[i];
      if (p.done) continue;
      double cost;
      switch (p.kind) {
        case Part::Builtin: {
          if (allBoundVec(p.vars, b)) cost = 0;
          else if (builtinSolvableFast(p, b)) cost = 0.5;
          else continue;
          break;
        }
        case Part::Pos: {
          if (allBoundVec(p.vars, b)) {
            cost = 0.25;
          } else {
            if (containsUnboundArith(p.lit->atom, b)) continue;
            auto it = possible_.find(p.predKey);
            cost = 2.0 + (it == possible_.end() ? 0 : it->second.atoms.size());
          }
          break;
        }
        case Part::Neg: {
          if (!allBoundVec(p.vars, b)) continue;
          cost = 1.0;
          break;
        }
        case Part::Cond:
        case Part::Agg: {
          // schedulable once global vars are bound; locals resolved inside
          if (!p.varsComputed) {
            std::set<std::string> g = globalVarsOf(p, parts);
            p.vars.assign(g.begin(), g.end());
            p.varsComputed = true;
          }
          if (!allBoundVec(p.vars, b)) continue;
          cost = 1.5;
          break;
        }
      }
      if (best < 0 || cost < bestCost) {
        best = static_cast<int>(i);
        bestCost = cost;
      }
      if (bestCost == 0) break;
    }
    if (best < 0) {
      bool remaining = false;
      for (Part& p : parts)
        if (!p.done) remaining = true;
      if (remaining) err("cannot order body for grounding (uninvertible arithmetic?)", line);
      leaf(b);
      return;
    }
    Part& p = parts[best];
    p.done = true;
    auto rec = [&]() -> bool {
      joinParts(parts, b, line, passA, leaf);
      return true;
    };
    switch (p.kind) {
      case Part::Pos: {
        forEachMatch(atomTerm(*p.lit), b, line, rec, p.minIndex);
        break;
      }
      case Part::Builtin: {
        bool enumerated = false;
        BuiltinResult br = evalBuiltin(*p.lit, b, line, rec, &enumerated);
        if (!enumerated && br == BuiltinResult::True) rec();
        break;
      }
      case Part::Neg: {
        // over-approximated as satisfiable unless it contradicts a fact
        if (allBoundVec(p.vars, b)) {
          bool anon = false;
          std::set<std::string> vs;
          collectVarsOf(*p.lit, vs);
          for (const auto& v : vs)
            if (v.back() == '#') anon = true;
          if (!anon) {
            auto v = evalTerm(atomTerm(*p.lit), b, line);
            if (v && staticFacts_.count(*v)) break; // instance pruned
          }
        }
        rec();
        break;
      }
      case Part::Cond:
      case Part::Agg:
        // Handled at the leaf during emission; pass A ignores them.
        rec();
        break;
    }
    p.done = false;
  }

  std::set<std::string> globalVarsOf(const Part& p, const std::vector<Part>& parts) {
    // Variables of the element that occur elsewhere in the rule are global;
    // by safety they must be bound. Locals are resolved inside the element.
    std::set<std::string> mine, elsewhere;
    if (p.kind == Part::Cond) {
      collectVarsOf(p.cond->head, mine);
      for (const Literal& c : p.cond->condition) collectVarsOf(c, mine);
    } else {
      for (const AggregateElement& el : p.agg->elements) {
        for (const Term& t : el.tuple) collectVarsOf(t, mine);
        for (const Literal& c : el.condition) collectVarsOf(c, mine);
      }
    }
    // Only plain literals make a variable global; names shared between two
    // conditional/aggregate elements are local to each element.
    for (const Part& q : parts) {
      if (&q == &p) continue;
      if (q.kind == Part::Pos || q.kind == Part::Neg || q.kind == Part::Builtin)
        collectVarsOf(*q.lit, elsewhere);
    }
    std::set<std::string> global;
    for (const auto& v : mine)
      if (elsewhere.count(v) && v.back() != '#') global.insert(v);
    return global;
  }

  std::vector<Part> makeParts(const Rule& r, bool passA) {
    std::vector<Part> parts;
    for (const BodyElement& e : r.body) {
      if (auto* l = std::get_if<Literal>(&e)) {
        parts.push_back(makeLitPart(l));
      } else if (auto* c = std::get_if<ConditionalLiteral>(&e)) {
        if (passA) continue;
        Part p;
        p.kind = Part::Cond;
        p.cond = c;
        parts.push_back(p);
      } else if (auto* a = std::get_if<Aggregate>(&e)) {
        Part p;
        p.kind = Part::Agg;
        p.agg = a;
        if (passA) {
          // Needed only when the aggregate binds a variable via "N = #count".
          bool binds = false;
          for (const auto& g : {a->leftGuard, a->rightGuard})
            if (g && g->first == Rel::Eq && g->second.kind == TermKind::Variable) binds = true;
          if (!binds) continue;
        }
        parts.push_back(p);
      }
    }
    return parts;
  }

  // --- pass A: possible-atom closure ---------------------------------------

  void collectHerbrand() {
    // naive mode: pre-seed the possible store with every constructible atom
    // is impossible in general; instead we instantiate rules by cross
    // products over constants at emission (handled via possible closure with
    // constants substituted for variables). We implement naive mode by
    // enumerating constants here and running pass A with "cross product"
    // semantics: every rule head instance derived from any combination.
    std::function<void(const Term&)> scanT = [&](const Term& t) {
      if (t.kind == TermKind::Number || t.kind == TermKind::Symbol ||
          t.kind == TermKind::String)
        herbrand_.push_back(t);
      if (t.kind == TermKind::Interval && t.args[0].kind == TermKind::Number &&
          t.args[1].kind == TermKind::Number) {
        for (int64_t v = t.args[0].num; v <= t.args[1].num; ++v)
          herbrand_.push_back(Term::number(v));
      }
      for (const Term& a : t.args) scanT(a);
    };
    auto scanL = [&](const Literal& l) {
      if (l.builtin) {
        scanT(l.lhs);
        scanT(l.rhs);
      } else {
        for (const Term& a : l.atom.args) scanT(a);
      }
    };
    for (const Rule& r : rules_) {
      for (const Literal& h : r.head) scanL(h);
      for (const BodyElement& e : r.body) {
        if (auto* l = std::get_if<Literal>(&e)) scanL(*l);
        else if (auto* c = std::get_if<ConditionalLiteral>(&e)) {
          scanL(c->head);
          for (const Literal& x : c->condition) scanL(x);
        } else if (auto* a = std::get_if<Aggregate>(&e)) {
          for (const AggregateElement& el : a->elements)
            for (const Literal& x : el.condition) scanL(x);
        }
      }
      for (const ChoiceElement& el : r.choice.elements) {
        scanL(el.lit);
        for (const Literal& x : el.condition) scanL(x);
      }
    }
    std::sort(herbrand_.begin(), herbrand_.end());
    herbrand_.erase(std::unique(herbrand_.begin(), herbrand_.end()), herbrand_.end());
    if (herbrand_.empty()) herbrand_.push_back(Term::symbol("a"));
  }

  void naiveSeed() {
    // Instantiate every rule head over the full cross product of constants.
    for (const Rule& r : rules_) {
      std::set<std::string> vars;
      for (const Literal& h : r.head) collectVarsOf(h, vars);
      for (const BodyElement& e : r.body)
        if (auto* l = std::get_if<Literal>(&e)) collectVarsOf(*l, vars);
      for (const ChoiceElement& el : r.choice.elements) {
        collectVarsOf(el.lit, vars);
        for (const Literal& c : el.condition) collectVarsOf(c, vars);
      }
      std::vector<std::string> vs(vars.begin(), vars.end());
      std::function<void(size_t, Binding&)> rec = [&](size_t i, Binding& b) {
        if (i == vs.size()) {
          for (const Literal& h : r.head) {
            auto v = evalTerm(atomTerm(h), b, r.line);
            if (v) {
              std::vector<Term> heads;
              expandIntervals(*v, heads, r.line);
              for (const Term& ht : heads) addPossible(ht);
            }
          }
          for (const ChoiceElement& el : r.choice.elements) {
            auto v = evalTerm(atomTerm(el.lit), b, r.line);
            if (v) addPossible(*v);
          }
          return;
        }
        if (vs[i].back() == '#') {
          // anonymous: enumerate too
        }
        for (const Term& c : herbrand_) {
          b[vs[i]] = c;
          rec(i + 1, b);
        }
        b.erase(vs[i]);
      };
      Binding b;
      rec(0, b);
    }
  }

  void computePossible() {
    if (opts_.naive) {
      naiveSeed();
      return;
    }
    // round 0: full instantiation
    for (const Rule& r : rules_) {
      std::vector<Part> parts = makeParts(r, /*passA=*/true);
      Binding b;
      joinParts(parts, b, r.line, true, [&](Binding& bb) { derivePossibleHeads(r, bb); });
    }
    // semi-naive rounds: at least one positive literal must match an atom
    // derived since the previous round
    std::unordered_map<std::string, size_t> prevStart; // delta window lower bound
    int round = 1;
    while (true) {
      std::unordered_map<std::string, size_t> thisStart;
      for (const auto& [k, st] : possible_) thisStart[k] = st.atoms.size();
      size_t before = out_.atoms.size();
      for (const Rule& r : rules_) {
        std::vector<Part> parts = makeParts(r, /*passA=*/true);
        bool hasAggAssign = false;
        for (const Part& p : parts)
          if (p.kind == Part::Agg) hasAggAssign = true;
        std::vector<int> posIdx;
        for (size_t i = 0; i < parts.size(); ++i)
          if (parts[i].kind == Part::Pos) posIdx.push_back(static_cast<int>(i));
        if (posIdx.empty() && !hasAggAssign && r.choice.elements.empty()) continue;
        bool anyDelta = false;
        for (int d : posIdx) {
          const std::string& pk = parts[d].predKey;
          size_t lo = prevStart.count(pk) ? prevStart.at(pk) : 0;
          size_t hi = thisStart.count(pk) ? thisStart.at(pk) : 0;
          if (hi <= lo) continue; // no new atoms for this position
          anyDelta = true;
          for (Part& p : parts) p.minIndex = 0;
          parts[d].minIndex = static_cast<int>(lo);
          Binding b;
          joinParts(parts, b, r.line, true,
                    [&](Binding& bb) { derivePossibleHeads(r, bb); });
        }
        if (!anyDelta) {
          // heads may still grow through aggregate-assignment conditions or
          // choice-element conditions; re-run fully when those preds changed
          bool touched = false;
          auto checkLit = [&](const Literal& c) {
            if (c.builtin) return;
            const std::string pk = predKeyOf(atomTerm(c));
            size_t lo = prevStart.count(pk) ? prevStart.at(pk) : 0;
            size_t hi = thisStart.count(pk) ? thisStart.at(pk) : 0;
            if (hi > lo) touched = true;
          };
          if (hasAggAssign)
            for (const BodyElement& e : r.body) {
              if (auto* a = std::get_if<Aggregate>(&e))
                for (const AggregateElement& el : a->elements)
                  for (const Literal& c : el.condition) checkLit(c);
            }
          for (const ChoiceElement& el : r.choice.elements)
            for (const Literal& c : el.condition) checkLit(c);
          if (touched) {
            for (Part& p : parts) p.minIndex = 0;
            Binding b;
            joinParts(parts, b, r.line, true,
                      [&](Binding& bb) { derivePossibleHeads(r, bb); });
          }
        }
      }
      if (out_.atoms.size() == before) break;
      prevStart = std::move(thisStart);
      if (++round > 100000) err("possible-closure did not converge", 0);
    }
  }

  void derivePossibleHeads(const Rule& r, Binding& b) {
    // Aggregate assignment guards: enumerate count values.
    for (const BodyElement& e : r.body) {
      if (auto* a = std::get_if<Aggregate>(&e)) {
        for (const auto& g : {a->leftGuard, a->rightGuard}) {
          if (g && g->first == Rel::Eq && g->second.kind == TermKind::Variable &&
              !b.count(g->second.text)) {
            size_t maxCount = countPossibleTuples(*a, b, r.line);
            for (size_t v = 0; v <= maxCount; ++v) {
              b[g->second.text] = Term::number(static_cast<int64_t>(v));
              derivePossibleHeads(r, b);
            }
            b.erase(g->second.text);
            return;
          }
        }
      }
    }
    auto add = [&](const Literal& h) {
      auto v = evalTerm(atomTerm(h), b, r.line);
      if (!v) return;
      std::vector<Term> heads;
      expandIntervals(*v, heads, r.line);
      for (const Term& ht : heads) addPossible(ht);
    };
    for (const Literal& h : r.head) add(h);
    for (const ChoiceElement& el : r.choice.elements) {
      // enumerate element condition over possibles
      std::vector<Part> condParts;
      std::vector<Literal> condCopy = el.condition;
      for (Literal& c : condCopy) {
        Part p = makeLitPart(&c);
        if (p.kind == Part::Neg) continue;
        condParts.push_back(std::move(p));
      }
      joinParts(condParts, b, r.line, true, [&](Binding& bb) {
        (void)bb;
        add(el.lit);
      });
    }
  }

  size_t countPossibleTuples(const Aggregate& a, Binding& b, int line) {
    std::set<std::string> tuples;
    for (const AggregateElement& el : a.elements) {
      std::vector<Part> parts;
      std::vector<Literal> condCopy = el.condition;
      for (Literal& c : condCopy) {
        Part p = makeLitPart(&c);
        if (p.kind == Part::Neg) continue;
        parts.push_back(std::move(p));
      }
      joinParts(parts, b, line, true, [&](Binding& bb) {
        std::string key;
        for (const Term& t : el.tuple) {
          auto v = evalTerm(t, bb, line);
          key += v ? v->toString() : "?";
          key += '\x1f';
        }
        tuples.insert(key);
      });
    }
    return tuples.size();
  }

  // --- emission -------------------------------------------------------------

  struct InstFail {}; // instance statically false

  void emitRules() {
    for (const Rule& r : rules_) {
      std::vector<Part> parts = makeParts(r, /*passA=*/false);
      Binding b;
      joinParts(parts, b, r.line, false, [&](Binding& bb) { emitInstance(r, bb); });
    }
  }

  void emitInstance(const Rule& r, Binding& b) {
    // Handle aggregate assignment enumeration first.
    for (const BodyElement& e : r.body) {
      if (auto* a = std::get_if<Aggregate>(&e)) {
        for (const auto& g : {a->leftGuard, a->rightGuard}) {
          if (g && g->first == Rel::Eq && g->second.kind == TermKind::Variable &&
              !b.count(g->second.text)) {
            size_t maxCount = countPossibleTuples(*a, b, r.line);
            for (size_t v = 0; v <= maxCount; ++v) {
              b[g->second.text] = Term::number(static_cast<int64_t>(v));
              emitInstance(r, b);
            }
            b.erase(g->second.text);
            return;
          }
        }
      }
    }
    GroundRule gr;
    gr.srcLine = r.line;
    try {
      buildBody(r, b, gr);
    } catch (InstFail&) {
      return;
    }
    switch (r.kind) {
      case RuleKind::Basic: {
        std::vector<Atom> heads;
        for (const Literal& h : r.head) {
          auto v = evalTerm(atomTerm(h), b, r.line);
          if (!v) return;
          std::vector<Term> hts;
          expandIntervals(*v, hts, r.line);
          for (const Term& ht : hts) {
            if (!isPossible(ht)) addPossible(ht);
            heads.push_back(out_.atomIds.at(ht));
          }
        }
        if (r.head.size() == 1) {
          // interval-expanded heads of facts become several rules
          for (Atom h : heads) {
            GroundRule copy = gr;
            copy.kind = GroundRuleKind::Normal;
            copy.head = {h};
            pushRule(std::move(copy));
          }
        } else {
          gr.kind = GroundRuleKind::Disjunctive;
          gr.head = std::move(heads);
          pushRule(std::move(gr));
        }
        break;
      }
      case RuleKind::Choice: {
        gr.kind = GroundRuleKind::Choice;
        std::map<Atom, std::vector<std::vector<Lit>>> members; // atom -> cond alternatives
        for (const ChoiceElement& el : r.choice.elements) {
          std::vector<Part> condParts;
          std::vector<Literal> condCopy = el.condition;
          for (Literal& c : condCopy) {
            Part p = makeLitPart(&c);
            condParts.push_back(std::move(p));
          }
          joinParts(condParts, b, r.line, false, [&](Binding& bb) {
            std::vector<Lit> cond;
            try {
              for (const Literal& c : condCopy) {
                if (c.builtin) continue;
                addBodyLiteral(c, bb, r.line, cond);
              }
            } catch (InstFail&) {
              return; // condition statically false: member never offered
            }
            auto v = evalTerm(atomTerm(el.lit), bb, r.line);
            if (!v) return;
            std::vector<Term> hts;
            expandIntervals(*v, hts, r.line);
            for (const Term& ht : hts) {
              if (!isPossible(ht)) addPossible(ht);
              members[out_.atomIds.at(ht)].push_back(cond);
            }
          });
        }
        for (auto& [atom, conds] : members) {
          gr.head.push_back(atom);
          bool unconditional = false;
          for (const auto& c : conds)
            if (c.empty()) unconditional = true;
          if (unconditional || conds.size() == 1) {
            gr.headConds.push_back(unconditional ? std::vector<Lit>{} : conds[0]);
          } else {
            // several witnesses for one member: helper atom with one rule per
            // alternative keeps the member counted at most once
            Term helper =
                Term::compound("'mem", {out_.atoms[atom], Term::number(static_cast<int64_t>(
                                                              out_.rules.size()))});
            Atom id = registerAtom(helper);
            out_.internal[id] = true;
            addPossible(helper);
            for (auto& alt : conds) {
              GroundRule pr;
              pr.kind = GroundRuleKind::Normal;
              pr.head = {id};
              pr.body = alt;
              pr.srcLine = r.line;
              pushRule(std::move(pr));
            }
            gr.headConds.push_back({id});
          }
        }
        int64_t lo = 0, hi = -1;
        if (r.choice.exact) {
          auto v = evalTerm(*r.choice.exact, b, r.line);
          if (!v || v->kind != TermKind::Number) err("choice bound must be an integer", r.line);
          lo = hi = v->num;
        } else {
          if (r.choice.lower) {
            auto v = evalTerm(*r.choice.lower, b, r.line);
            if (!v || v->kind != TermKind::Number)
              err("choice bound must be an integer", r.line);
            lo = v->num;
          }
          if (r.choice.upper) {
            auto v = evalTerm(*r.choice.upper, b, r.line);
            if (!v || v->kind != TermKind::Number)
              err("choice bound must be an integer", r.line);
            hi = v->num;
          }
        }
        gr.choiceLower = lo;
        gr.choiceUpper = hi;
        pushRule(std::move(gr));
        break;
      }
      case RuleKind::Constraint: {
        gr.kind = GroundRuleKind::Constraint;
        pushRule(std::move(gr));
        break;
      }
      case RuleKind::Weak: {
        gr.kind = GroundRuleKind::Weak;
        auto w = evalTerm(r.weight, b, r.line);
        auto l = evalTerm(r.level, b, r.line);
        if (!w || w->kind != TermKind::Number || !l || l->kind != TermKind::Number)
          err("weak-constraint weight/level must evaluate to integers", r.line);
        gr.weight = w->num;
        gr.level = l->num;
        std::string key = std::to_string(l->num) + "@";
        for (const Term& t : r.tuple) {
          auto v = evalTerm(t, b, r.line);
          if (!v) err("unbound weak-constraint term", r.line);
          key += v->toString();
          key += '\x1f';
        }
        key += "w" + std::to_string(w->num);
        gr.tupleKey = std::move(key);
        pushRule(std::move(gr));
        break;
      }
    }
  }

  // Builds plain body literals, conditional instances and aggregates of one
  // rule instance; throws InstFail when the instance is statically false.
  void buildBody(const Rule& r, Binding& b, GroundRule& gr) {
    for (const BodyElement& e : r.body) {
      if (auto* l = std::get_if<Literal>(&e)) {
        if (l->builtin) continue; // evaluated during the join
        addBodyLiteral(*l, b, r.line, gr.body);
      } else if (auto* c = std::get_if<ConditionalLiteral>(&e)) {
        GroundConditional gc;
        buildConditional(*c, b, r.line, gc, gr.body);
        if (!gc.instances.empty()) gr.conditionals.push_back(std::move(gc));
      } else if (auto* a = std::get_if<Aggregate>(&e)) {
        buildAggregate(*a, b, r.line, gr);
      }
    }
    // drop duplicates; detect p & not p
    std::sort(gr.body.begin(), gr.body.end());
    gr.body.erase(std::unique(gr.body.begin(), gr.body.end()), gr.body.end());
    for (size_t i = 0; i + 1 < gr.body.size(); ++i)
      for (size_t j = i + 1; j < gr.body.size(); ++j)
        if (gr.body[i] == -gr.body[j]) throw InstFail{};
  }

  // Appends the signed literal for `l` under binding, simplifying against
  // certain/possible knowledge. Throws InstFail when statically false.
  void addBodyLiteral(const Literal& l, Binding& b, int line, std::vector<Lit>& out) {
    Term pat = atomTerm(l);
    bool hasAnon = false;
    std::set<std::string> vars;
    collectVarsOf(pat, vars);
    for (const auto& v : vars)
      if (v.back() == '#') hasAnon = true;
    if (l.defaultNeg && hasAnon) {
      Lit p = projectionLit(pat, b, line);
      if (p == 0) return; // no possible instance: "not p(..)" is true
      if (p == std::numeric_limits<Lit>::min()) throw InstFail{}; // certainly false
      out.push_back(-p);
      return;
    }
    auto v = evalTerm(pat, b, line);
    if (!v) err("unbound variable in literal '" + l.toString() + "'", line);
    if (l.defaultNeg) {
      if (!isPossible(*v)) return; // true
      if (isCertain(*v)) throw InstFail{};
      out.push_back(-out_.atomIds.at(*v));
    } else {
      if (!isPossible(*v)) throw InstFail{};
      if (isCertain(*v)) return; // true
      out.push_back(out_.atomIds.at(*v));
    }
  }

  // Existential projection for patterns with anonymous variables:
  // returns +id of an internal atom true iff some possible instance holds,
  // 0 when no possible instance exists, INT_MIN when certainly true.
  Lit projectionLit(const Term& pat, Binding& b, int line) {
    auto bound = evalProjPattern(pat, b, line);
    Term key = bound;
    markAnon(key);
    key.text = "'p_" + key.text;
    auto it = projCache_.find(key);
    if (it != projCache_.end()) return it->second;
    // collect matching possible atoms
    std::vector<Term> matches;
    const std::string pk = predKeyOf(bound);
    auto ps = possible_.find(pk);
    bool certainHit = false;
    if (ps != possible_.end()) {
      Binding local;
      std::vector<std::string> trail;
      for (const Term& g : ps->second.atoms) {
        size_t mark = trail.size();
        if (matchTerm(bound, g, local, trail, line)) {
          matches.push_back(g);
          if (isCertain(g)) certainHit = true;
        }
        undo(local, trail, mark);
      }
    }
    Lit result;
    if (matches.empty()) {
      result = 0;
    } else if (certainHit) {
      result = std::numeric_limits<Lit>::min();
    } else {
      Term projAtom = key;
      Atom id = registerAtom(projAtom);
      out_.internal[id] = true;
      addPossible(projAtom);
      for (const Term& m : matches) {
        GroundRule pr;
        pr.kind = GroundRuleKind::Normal;
        pr.head = {id};
        pr.body = {out_.atomIds.at(m)};
        pr.srcLine = line;
        pushRule(std::move(pr));
      }
      result = id;
    }
    projCache_.emplace(key, result);
    return result;
  }

  Term evalProjPattern(const Term& t, Binding& b, int line) {
    switch (t.kind) {
      case TermKind::Variable: {
        if (t.text.back() == '#') return t; // keep anonymous
        auto it = b.find(t.text);
        if (it == b.end()) err("unbound variable '" + t.text + "'", line);
        return it->second;
      }
      case TermKind::Compound: {
        Term out = t;
        for (Term& a : out.args) a = evalProjPattern(a, b, line);
        return out;
      }
      case TermKind::Binary:
      case TermKind::Unary:
      case TermKind::Interval: {
        auto v = evalTerm(t, b, line);
        if (!v) err("unbound arithmetic in projected literal", line);
        return *v;
      }
      default:
        return t;
    }
  }

  // Projection atoms live under a renamed predicate so they never pollute
  // the projected predicate's own store.
  static void markAnon(Term& t) {
    if (t.kind == TermKind::Variable && t.text.back() == '#') {
      t = Term::symbol("'any");
      return;
    }
    for (Term& a : t.args) markAnon(a);
  }

  void buildConditional(const ConditionalLiteral& c, Binding& b, int line,
                        GroundConditional& gc, std::vector<Lit>& plainBody) {
    // locals: vars not bound globally
    std::vector<Literal> condCopy = c.condition;
    std::vector<Part> parts;
    for (Literal& cl : condCopy) {
      Part p = makeLitPart(&cl);
      parts.push_back(std::move(p));
    }
    bool anyFalseElement = false;
    joinParts(parts, b, line, false, [&](Binding& bb) {
      if (anyFalseElement) return;
      GroundCondInstance inst;
      bool condCertain = true;
      try {
        for (const Literal& cl : condCopy) {
          if (cl.builtin) continue;
          std::vector<Lit> lits;
          addBodyLiteral(cl, bb, line, lits);
          for (Lit l : lits) {
            inst.cond.push_back(l);
            condCertain = false;
          }
        }
      } catch (InstFail&) {
        return; // condition statically false: instance vacuous
      }
      // head under this instance
      Lit thenLit = 0;
      bool headTrue = false;
      if (c.head.builtin) {
        auto le = evalTerm(c.head.lhs, bb, line);
        auto re = evalTerm(c.head.rhs, bb, line);
        if (!le || !re) err("unbound variable in conditional head", line);
        bool truth;
        if (re->kind == TermKind::Interval)
          truth = le->kind == TermKind::Number && le->num >= re->args[0].num &&
                  le->num <= re->args[1].num;
        else if (le->kind == TermKind::Number && re->kind == TermKind::Number)
          truth = relHolds(c.head.rel, le->num, re->num);
        else
          truth = relHolds(c.head.rel, *le, *re);
        if (c.head.defaultNeg) truth = !truth;
        headTrue = truth;
        thenLit = 0; // only meaningful when !headTrue
      } else {
        Term pat = atomTerm(c.head);
        std::set<std::string> vars;
        collectVarsOf(pat, vars);
        bool hasAnon = false;
        for (const auto& v : vars)
          if (v.back() == '#') hasAnon = true;
        if (hasAnon) {
          Lit p = projectionLit(pat, bb, line);
          if (p == 0) {
            headTrue = false;
            thenLit = 0;
          } else if (p == std::numeric_limits<Lit>::min()) {
            headTrue = !c.head.defaultNeg;
            thenLit = 0;
            if (!headTrue) { /* certainly false */ }
          } else {
            thenLit = c.head.defaultNeg ? -p : p;
          }
        } else {
          auto v = evalTerm(pat, bb, line);
          if (!v) err("unbound variable in conditional head", line);
          if (!isPossible(*v)) {
            headTrue = c.head.defaultNeg;
            thenLit = 0;
          } else if (isCertain(*v)) {
            headTrue = !c.head.defaultNeg;
            thenLit = 0;
          } else {
            Lit id = out_.atomIds.at(*v);
            thenLit = c.head.defaultNeg ? -id : id;
          }
        }
      }
      if (thenLit == 0 && headTrue) return; // implication trivially true
      if (thenLit == 0 && !headTrue) {
        // head certainly false: condition must not hold
        if (inst.cond.empty() && condCertain) {
          anyFalseElement = true; // whole element false -> instance fails
          return;
        }
        inst.then = 0;
        gc.instances.push_back(std::move(inst));
        return;
      }
      if (inst.cond.empty()) {
        plainBody.push_back(thenLit); // unconditional requirement
        return;
      }
      inst.then = thenLit;
      gc.instances.push_back(std::move(inst));
    });
    if (anyFalseElement) throw InstFail{};
  }

  void buildAggregate(const Aggregate& a, Binding& b, int line, GroundRule& gr) {
    GroundAggregate ga;
    std::set<std::string> certainKeys;
    std::map<std::string, std::vector<std::vector<Lit>>> dynamic; // key -> alt cond sets
    for (const AggregateElement& el : a.elements) {
      std::vector<Literal> condCopy = el.condition;
      std::vector<Part> parts;
      for (Literal& cl : condCopy) {
        Part p = makeLitPart(&cl);
        parts.push_back(std::move(p));
      }
      joinParts(parts, b, line, false, [&](Binding& bb) {
        std::vector<Lit> lits;
        try {
          for (const Literal& cl : condCopy) {
            if (cl.builtin) continue;
            addBodyLiteral(cl, bb, line, lits);
          }
        } catch (InstFail&) {
          return;
        }
        std::string key;
        for (const Term& t : el.tuple) {
          auto v = evalTerm(t, bb, line);
          if (!v) err("unbound variable in aggregate tuple", line);
          key += v->toString();
          key += '\x1f';
        }
        if (lits.empty()) certainKeys.insert(key);
        else dynamic[key].push_back(std::move(lits));
      });
    }
    // Tuples already certain are a fixed offset on the count.
    int64_t base = static_cast<int64_t>(certainKeys.size());
    for (auto& [key, alts] : dynamic) {
      if (certainKeys.count(key)) continue;
      if (alts.size() == 1) {
        ga.elements.push_back({key, std::move(alts[0])});
      } else {
        // several ways to witness the same tuple: introduce a helper atom
        Term helper = Term::compound("'agg", {Term::string(key + "#" + std::to_string(line) +
                                                           "#" + std::to_string(out_.rules.size()))});
        Atom id = registerAtom(helper);
        out_.internal[id] = true;
        addPossible(helper);
        for (auto& alt : alts) {
          GroundRule pr;
          pr.kind = GroundRuleKind::Normal;
          pr.head = {id};
          pr.body = std::move(alt);
          pr.srcLine = line;
          pushRule(std::move(pr));
        }
        ga.elements.push_back({key, {id}});
      }
    }
    // guards
    auto applyGuard = [&](Rel rel, int64_t v) {
      switch (rel) {
        case Rel::Geq: ga.lower = std::max(ga.lower == GroundAggregate::kNoBound ? v : ga.lower, v); break;
        case Rel::Gt: applyGuardHelper(ga, v + 1, true); break;
        case Rel::Leq: ga.upper = ga.upper == GroundAggregate::kNoBound ? v : std::min(ga.upper, v); break;
        case Rel::Lt: applyGuardHelper(ga, v - 1, false); break;
        case Rel::Eq:
          applyGuardHelper(ga, v, true);
          applyGuardHelper(ga, v, false);
          break;
        case Rel::Neq: ga.notEqual = v; break;
      }
    };
    for (const auto& g : {a.leftGuard, a.rightGuard}) {
      if (!g) continue;
      auto v = evalTerm(g->second, b, line);
      if (!v) err("unbound aggregate guard", line);
      if (v->kind != TermKind::Number) err("aggregate guard must be an integer", line);
      applyGuard(g->first, v->num);
    }
    // shift bounds by the certain base count
    if (ga.lower != GroundAggregate::kNoBound) ga.lower -= base;
    if (ga.upper != GroundAggregate::kNoBound) ga.upper -= base;
    if (ga.notEqual != GroundAggregate::kNoBound) ga.notEqual -= base;
    int64_t maxCount = static_cast<int64_t>(ga.elements.size());
    // statically decide when possible
    bool lowerOk = ga.lower == GroundAggregate::kNoBound || ga.lower <= 0;
    bool upperOk = ga.upper == GroundAggregate::kNoBound || ga.upper >= maxCount;
    if (ga.lower != GroundAggregate::kNoBound && ga.lower > maxCount) throw InstFail{};
    if (ga.upper != GroundAggregate::kNoBound && ga.upper < 0) throw InstFail{};
    if (lowerOk && upperOk && ga.notEqual == GroundAggregate::kNoBound) return; // trivially true
    if (ga.notEqual != GroundAggregate::kNoBound && maxCount == 0 && ga.notEqual == 0)
      throw InstFail{};
    gr.aggregates.push_back(std::move(ga));
  }

  static void applyGuardHelper(GroundAggregate& ga, int64_t v, bool lower) {
    if (lower)
      ga.lower = ga.lower == GroundAggregate::kNoBound ? v : std::max(ga.lower, v);
    else
      ga.upper = ga.upper == GroundAggregate::kNoBound ? v : std::min(ga.upper, v);
  }

  void pushRule(GroundRule gr) {
    std::string key;
    key += static_cast<char>('0' + static_cast<int>(gr.kind));
    for (size_t i = 0; i < gr.head.size(); ++i) {
      key += std::to_string(gr.head[i]);
      if (i < gr.headConds.size())
        for (Lit l : gr.headConds[i]) key += ":" + std::to_string(l);
      key += ",";
    }
    key += "|";
    for (Lit l : gr.body) key += std::to_string(l) + ",";
    key += "|" + std::to_string(gr.choiceLower) + "," + std::to_string(gr.choiceUpper);
    for (const auto& c : gr.conditionals) {
      key += "|c";
      for (const auto& inst : c.instances) {
        for (Lit l : inst.cond) key += std::to_string(l) + ",";
        key += "->" + std::to_string(inst.then) + ";";
      }
    }
    for (const auto& a : gr.aggregates) {
      key += "|a" + std::to_string(a.lower) + ":" + std::to_string(a.upper);
      for (const auto& el : a.elements) {
        key += el.tupleKey + "~";
        for (Lit l : el.cond) key += std::to_string(l) + ",";
      }
    }
    if (gr.kind == GroundRuleKind::Weak)
      key += "|w" + std::to_string(gr.weight) + "@" + std::to_string(gr.level) + gr.tupleKey;
    if (!ruleKeys_.insert(key).second) return;
    out_.rules.push_back(std::move(gr));
    if (out_.rules.size() > opts_.maxGroundRules)
      throw GroundError("ground rule cap (" + std::to_string(opts_.maxGroundRules) +
                        ") exceeded at rule from line " +
                        std::to_string(out_.rules.back().srcLine));
  }

  void finalize() {
    // facts: heads of unconditional empty-body rules
    for (const GroundRule& r : out_.rules) {
      if (r.kind == GroundRuleKind::Normal && r.body.empty() && r.conditionals.empty() &&
          r.aggregates.empty())
        out_.fact[r.head[0]] = true;
    }
    // complementary pairs p / -p
    for (Atom id = 1; id < static_cast<Atom>(out_.atoms.size()); ++id) {
      const Term& t = out_.atoms[id];
      if (!t.text.empty() && t.text[0] == '-') {
        Term pos = t;
        pos.text = t.text.substr(1);
        Atom pid = out_.idOf(pos);
        if (pid) {
          out_.complementPairs.emplace_back(pid, id);
          GroundRule gr;
          gr.kind = GroundRuleKind::Constraint;
          gr.body = {pid, id};
          pushRule(std::move(gr));
        }
      }
    }
  }

  GroundOptions opts_;
  std::vector<Rule> rules_;
  GroundProgram out_;
  std::unordered_map<std::string, PredStore> possible_;
  std::unordered_set<Term, TermHash> staticFacts_;
  std::unordered_set<std::string> definedPreds_;
  std::unordered_map<Term, Lit, TermHash> projCache_;
  std::unordered_set<std::string> ruleKeys_;
  std::vector<Term> herbrand_;
};

} // namespace

GroundProgram ground(const Program& program, const GroundOptions& opts) {
  Grounder g(program, opts);
  GroundProgram gp = g.run();
  gp.name = program.name;
  return gp;
}

} // namespace aspen::asp
