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

#include "aspen/asp/solver.h"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace aspen::asp {
namespace {

enum : int8_t { U = 0, T = 1, F = 2 };

class Solver {
public:
  Solver(const GroundProgram& gp, const SolveOptions& opts) : gp_(gp), opts_(opts) {
    n_ = gp.atoms.size();
    val_.assign(n_, U);
    buildIndexes();
  }

  SolveResult run() {
    start_ = std::chrono::steady_clock::now();
    SolveResult res;
    if (!initialPropagation()) {
      res.status = SolveStatus::Unsat;
      attachWitness(res);
      return res;
    }
    search();
    if (models_.empty()) {
      res.status = SolveStatus::Unsat;
      attachWitness(res);
      return res;
    }
    res.models = std::move(models_);
    if (opts_.optimize && hasWeak_) {
      res.status = SolveStatus::OptimumFound;
      res.optimum = best_;
    } else {
      res.status = SolveStatus::Sat;
    }
    return res;
  }

private:
  // --- indexes --------------------------------------------------------------

  void buildIndexes() {
    occ_.assign(n_, {});
    supports_.assign(n_, {});
    for (size_t ri = 0; ri < gp_.rules.size(); ++ri) {
      const GroundRule& r = gp_.rules[ri];
      std::unordered_set<Atom> touched;
      auto touch = [&](Lit l) { touched.insert(static_cast<Atom>(l > 0 ? l : -l)); };
      for (Lit l : r.body) touch(l);
      for (const GroundConditional& c : r.conditionals)
        for (const GroundCondInstance& inst : c.instances) {
          for (Lit l : inst.cond) touch(l);
          if (inst.then != 0) touch(inst.then);
        }
      for (const GroundAggregate& a : r.aggregates) {
        hasAgg_ = true;
        for (const GroundAggElement& el : a.elements)
          for (Lit l : el.cond) touch(l);
      }
      for (const auto& conds : r.headConds)
        for (Lit l : conds) touch(l);
      for (Atom h : r.head) touched.insert(h);
      for (Atom a : touched) occ_[a].push_back(static_cast<int>(ri));
      if (r.kind == GroundRuleKind::Normal || r.kind == GroundRuleKind::Disjunctive ||
          r.kind == GroundRuleKind::Choice) {
        for (Atom h : r.head) supports_[h].push_back(static_cast<int>(ri));
      }
      if (r.kind == GroundRuleKind::Weak) {
        hasWeak_ = true;
        auto [it, fresh] = weakGroups_.try_emplace(r.tupleKey, WeakGroup{});
        if (fresh) {
          it->second.weight = r.weight;
          it->second.level = r.level;
        }
        it->second.rules.push_back(static_cast<int>(ri));
      }
    }
    computeLoopAtoms();
  }

  void computeLoopAtoms() {
    // Tarjan SCC over the positive plain-literal dependency graph.
    std::vector<std::vector<Atom>> adj(n_);
    for (const GroundRule& r : gp_.rules) {
      if (r.kind == GroundRuleKind::Constraint || r.kind == GroundRuleKind::Weak) continue;
      for (size_t i = 0; i < r.head.size(); ++i) {
        Atom h = r.head[i];
        for (Lit l : r.body)
          if (l > 0) adj[h].push_back(l);
        if (r.kind == GroundRuleKind::Choice && i < r.headConds.size())
          for (Lit l : r.headConds[i])
            if (l > 0) adj[h].push_back(l);
      }
    }
    std::vector<int> index(n_, -1), low(n_, 0);
    std::vector<bool> onStack(n_, false);
    std::vector<Atom> stack;
    loopAtom_.assign(n_, false);
    int counter = 0;
    // iterative Tarjan
    struct Frame {
      Atom v;
      size_t edge;
    };
    for (Atom s = 1; s < static_cast<Atom>(n_); ++s) {
      if (index[s] != -1) continue;
      std::vector<Frame> frames{{s, 0}};
      index[s] = low[s] = counter++;
      stack.push_back(s);
      onStack[s] = true;
      while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.edge < adj[f.v].size()) {
          Atom w = adj[f.v][f.edge++];
          if (index[w] == -1) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            onStack[w] = true;
            frames.push_back({w, 0});
          } else if (onStack[w]) {
            low[f.v] = std::min(low[f.v], index[w]);
          }
        } else {
          if (low[f.v] == index[f.v]) {
            std::vector<Atom> comp;
            while (true) {
              Atom w = stack.back();
              stack.pop_back();
              onStack[w] = false;
              comp.push_back(w);
              if (w == f.v) break;
            }
            if (comp.size() > 1) {
              for (Atom w : comp) loopAtom_[w] = true;
              hasLoops_ = true;
            } else {
              // self-loop?
              Atom w = comp[0];
              for (Atom x : adj[w])
                if (x == w) {
                  loopAtom_[w] = true;
                  hasLoops_ = true;
                }
            }
          }
          Atom v = f.v;
          frames.pop_back();
          if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
      }
    }
    if (hasLoops_) {
      for (size_t ri = 0; ri < gp_.rules.size(); ++ri) {
        const GroundRule& r = gp_.rules[ri];
        if (r.kind == GroundRuleKind::Constraint || r.kind == GroundRuleKind::Weak) continue;
        for (Atom h : r.head)
          if (loopAtom_[h]) {
            loopRules_.push_back(static_cast<int>(ri));
            break;
          }
      }
    }
  }

  // --- assignment -----------------------------------------------------------

  bool assign(Atom a, int8_t v) {
    if (val_[a] != U) return val_[a] == v;
    val_[a] = v;
    trail_.push_back(a);
    queue_.push_back(a);
    return true;
  }

  int8_t litState(Lit l) const {
    int8_t v = val_[static_cast<size_t>(l > 0 ? l : -l)];
    if (v == U) return U;
    if (l > 0) return v;
    return v == T ? F : T;
  }

  // --- rule evaluation -------------------------------------------------------

  struct BodyEval {
    int8_t state = U;          // T, F, U over the whole body
    int undecidedPlain = 0;    // count of undecided plain literals
    Lit lastUndecidedPlain = 0;
    bool externalsUndecided = false; // conditional/aggregate parts undecided
  };

  int8_t memberCondState(const GroundRule& r, size_t idx) const {
    if (idx >= r.headConds.size() || r.headConds[idx].empty()) return T;
    bool anyU = false;
    for (Lit l : r.headConds[idx]) {
      int8_t s = litState(l);
      if (s == F) return F;
      if (s == U) anyU = true;
    }
    return anyU ? U : T;
  }

  int8_t condInstanceState(const GroundCondInstance& inst) const {
    if (inst.then != 0) {
      int8_t ts = litState(inst.then);
      if (ts == T) return T;
      bool allCondT = true;
      for (Lit l : inst.cond) {
        int8_t s = litState(l);
        if (s == F) return T; // implication vacuously true
        if (s != T) allCondT = false;
      }
      if (allCondT) return ts == F ? F : U;
      return U;
    }
    // then == 0: condition must not hold
    bool allCondT = true;
    for (Lit l : inst.cond) {
      int8_t s = litState(l);
      if (s == F) return T;
      if (s != T) allCondT = false;
    }
    return allCondT ? F : U;
  }

  int8_t conditionalState(const GroundConditional& c) const {
    bool anyU = false;
    for (const GroundCondInstance& inst : c.instances) {
      int8_t s = condInstanceState(inst);
      if (s == F) return F;
      if (s == U) anyU = true;
    }
    return anyU ? U : T;
  }

  int8_t aggregateState(const GroundAggregate& a) const {
    // distinct-tuple min/max counts
    std::unordered_map<std::string, int8_t> tuple; // T definite, U possible
    for (const GroundAggElement& el : a.elements) {
      int8_t s = T;
      for (Lit l : el.cond) {
        int8_t ls = litState(l);
        if (ls == F) {
          s = F;
          break;
        }
        if (ls == U) s = U;
      }
      if (s == F) continue;
      auto [it, fresh] = tuple.try_emplace(el.tupleKey, s);
      if (!fresh && s == T) it->second = T;
    }
    int64_t mn = 0, mx = 0;
    for (const auto& [k, s] : tuple) {
      ++mx;
      if (s == T) ++mn;
    }
    bool violatedLow = a.lower != GroundAggregate::kNoBound && mx < a.lower;
    bool violatedHigh = a.upper != GroundAggregate::kNoBound && mn > a.upper;
    if (violatedLow || violatedHigh) return F;
    bool okLow = a.lower == GroundAggregate::kNoBound || mn >= a.lower;
    bool okHigh = a.upper == GroundAggregate::kNoBound || mx <= a.upper;
    if (a.notEqual != GroundAggregate::kNoBound) {
      if (okLow && okHigh && mn == mx) return mn == a.notEqual ? F : T;
      return U;
    }
    return okLow && okHigh ? T : U;
  }

  BodyEval evalBody(const GroundRule& r) const {
    BodyEval e;
    bool anyF = false, anyU = false;
    for (Lit l : r.body) {
      int8_t s = litState(l);
      if (s == F) anyF = true;
      else if (s == U) {
        anyU = true;
        ++e.undecidedPlain;
        e.lastUndecidedPlain = l;
      }
    }
    for (const GroundConditional& c : r.conditionals) {
      int8_t s = conditionalState(c);
      if (s == F) anyF = true;
      else if (s == U) {
        anyU = true;
        e.externalsUndecided = true;
      }
    }
    for (const GroundAggregate& a : r.aggregates) {
      int8_t s = aggregateState(a);
      if (s == F) anyF = true;
      else if (s == U) {
        anyU = true;
        e.externalsUndecided = true;
      }
    }
    e.state = anyF ? F : anyU ? U : T;
    return e;
  }

  // --- propagation ----------------------------------------------------------

  bool initialPropagation() {
    for (Atom a = 1; a < static_cast<Atom>(n_); ++a)
      if (gp_.fact[a] && !assign(a, T)) return false;
    // empty-body rules fire immediately; other atoms initially unsupported
    for (size_t ri = 0; ri < gp_.rules.size(); ++ri)
      pending_.push_back(static_cast<int>(ri));
    if (!propagate()) return false;
    for (Atom a = 1; a < static_cast<Atom>(n_); ++a)
      if (!checkSupport(a)) return false;
    if (!propagate()) return false;
    return sweepAndPropagate();
  }

  bool propagate() {
    while (!queue_.empty() || !pending_.empty()) {
      if (++ticks_ % 4096 == 0) checkBudget();
      if (!pending_.empty()) {
        int ri = pending_.front();
        pending_.pop_front();
        if (!processRule(ri)) return false;
        continue;
      }
      Atom a = queue_.front();
      queue_.pop_front();
      for (int ri : occ_[a]) pending_.push_back(ri);
      if (!checkSupport(a)) return false;
    }
    return true;
  }

  bool processRule(int ri) {
    const GroundRule& r = gp_.rules[ri];
    BodyEval e = evalBody(r);
    switch (r.kind) {
      case GroundRuleKind::Weak:
        return true;
      case GroundRuleKind::Constraint: {
        if (e.state == T) return conflict();
        if (e.state == U && e.undecidedPlain == 1 && !e.externalsUndecided) {
          // all other parts true: falsify the remaining literal
          Lit l = e.lastUndecidedPlain;
          return assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? F : T);
        }
        return true;
      }
      case GroundRuleKind::Normal: {
        Atom h = r.head[0];
        if (e.state == T && !assign(h, T)) return false;
        if (val_[h] == F && e.state == U && e.undecidedPlain == 1 && !e.externalsUndecided) {
          Lit l = e.lastUndecidedPlain;
          return assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? F : T);
        }
        return checkSupport(h);
      }
      case GroundRuleKind::Disjunctive: {
        if (e.state == T) {
          int undec = 0;
          Atom last = 0;
          bool sat = false;
          for (Atom h : r.head) {
            if (val_[h] == T) sat = true;
            else if (val_[h] == U) {
              ++undec;
              last = h;
            }
          }
          if (sat) return true;
          if (undec == 0) return conflict();
          if (undec == 1) return assign(last, T);
        } else if (e.state == U) {
          bool allHeadsFalse = true;
          for (Atom h : r.head)
            if (val_[h] != F) allHeadsFalse = false;
          if (allHeadsFalse && e.undecidedPlain == 1 && !e.externalsUndecided) {
            Lit l = e.lastUndecidedPlain;
            return assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? F : T);
          }
        }
        return true;
      }
      case GroundRuleKind::Choice: {
        if (e.state != T) return true;
        // minCount: members certainly counted; maxCount: possibly counted
        int64_t minCount = 0, maxCount = 0;
        for (size_t i = 0; i < r.head.size(); ++i) {
          int8_t a = val_[r.head[i]];
          int8_t c = memberCondState(r, i);
          if (a == T && c == T) ++minCount;
          if (a != F && c != F) ++maxCount;
        }
        int64_t hi = r.choiceUpper < 0 ? static_cast<int64_t>(r.head.size()) : r.choiceUpper;
        int64_t lo = r.choiceLower;
        if (minCount > hi) return conflict();
        if (maxCount < lo) return conflict();
        if (minCount == hi) {
          // no further member may become counted
          for (size_t i = 0; i < r.head.size(); ++i) {
            if (val_[r.head[i]] == U && memberCondState(r, i) == T)
              if (!assign(r.head[i], F)) return false;
          }
        } else if (maxCount == lo) {
          // every potentially counted member must count
          for (size_t i = 0; i < r.head.size(); ++i) {
            int8_t a = val_[r.head[i]];
            int8_t c = memberCondState(r, i);
            if (a == F || c == F) continue;
            if (a == U && !assign(r.head[i], T)) return false;
            if (i < r.headConds.size())
              for (Lit l : r.headConds[i]) {
                if (litState(l) == U &&
                    !assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? T : F))
                  return false;
              }
          }
        }
        return true;
      }
    }
    return true;
  }

  // An atom that is true needs at least one rule able to support it; with a
  // single remaining support the rule's plain body is forced.
  bool checkSupport(Atom a) {
    if (val_[a] == F || gp_.fact[a]) return true;
    int possible = 0;
    int lastRule = -1;
    for (int ri : supports_[a]) {
      const GroundRule& r = gp_.rules[ri];
      if (r.kind == GroundRuleKind::Choice) {
        // a choice with upper bound 0 cannot support anything
        if (r.choiceUpper == 0) continue;
        bool memberOk = false;
        for (size_t i = 0; i < r.head.size(); ++i)
          if (r.head[i] == a && memberCondState(r, i) != F) memberOk = true;
        if (!memberOk) continue;
      }
      BodyEval e = evalBody(r);
      if (e.state == F) continue;
      ++possible;
      lastRule = ri;
      if (possible > 1) break;
    }
    if (possible == 0) return val_[a] == T ? conflict() : assign(a, F);
    if (possible == 1 && val_[a] == T) {
      const GroundRule& r = gp_.rules[lastRule];
      for (Lit l : r.body) {
        int8_t s = litState(l);
        if (s == U && !assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? T : F)) return false;
      }
      if (r.kind == GroundRuleKind::Choice) {
        // the single surviving member condition must hold as well
        int surviving = -1;
        int alive = 0;
        for (size_t i = 0; i < r.head.size(); ++i)
          if (r.head[i] == a && memberCondState(r, i) != F) {
            ++alive;
            surviving = static_cast<int>(i);
          }
        if (alive == 1 && surviving >= 0 &&
            static_cast<size_t>(surviving) < r.headConds.size()) {
          for (Lit l : r.headConds[surviving]) {
            if (litState(l) == U &&
                !assign(static_cast<Atom>(l > 0 ? l : -l), l > 0 ? T : F))
              return false;
          }
        }
      }
    }
    return true;
  }

  bool conflict() { return false; }

  // Well-founded sweep for positive loops: atoms in nontrivial SCCs must be
  // derivable through rules whose bodies are not false and whose positive
  // loop dependencies are themselves derivable.
  bool sweepAndPropagate() {
    if (!hasLoops_) return true;
    while (true) {
      std::vector<bool> reached(n_, false);
      bool grow = true;
      while (grow) {
        grow = false;
        for (int ri : loopRules_) {
          const GroundRule& r = gp_.rules[ri];
          bool allHeadsDone = true;
          for (Atom h : r.head)
            if (loopAtom_[h] && !reached[h] && val_[h] != F) allHeadsDone = false;
          if (allHeadsDone) continue;
          bool ok = true;
          for (Lit l : r.body) {
            if (l > 0 && loopAtom_[l]) {
              if (!reached[l]) {
                ok = false;
                break;
              }
            } else if (litState(l) == F) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          for (const GroundConditional& c : r.conditionals)
            if (conditionalState(c) == F) {
              ok = false;
              break;
            }
          if (!ok) continue;
          for (const GroundAggregate& a : r.aggregates)
            if (aggregateState(a) == F) {
              ok = false;
              break;
            }
          if (!ok) continue;
          for (size_t i = 0; i < r.head.size(); ++i) {
            Atom h = r.head[i];
            if (!loopAtom_[h] || reached[h] || val_[h] == F) continue;
            bool condOk = true;
            if (r.kind == GroundRuleKind::Choice && i < r.headConds.size()) {
              for (Lit l : r.headConds[i]) {
                if (l > 0 && loopAtom_[l]) {
                  if (!reached[l]) condOk = false;
                } else if (litState(l) == F) {
                  condOk = false;
                }
              }
            }
            if (!condOk) continue;
            reached[h] = true;
            grow = true;
          }
        }
      }
      bool assigned = false;
      for (Atom a = 1; a < static_cast<Atom>(n_); ++a) {
        if (!loopAtom_[a] || reached[a] || val_[a] == F) continue;
        if (val_[a] == T) return conflict();
        if (!assign(a, F)) return false;
        assigned = true;
      }
      if (!assigned) return true;
      if (!propagate()) return false;
    }
  }

  // --- optimization bookkeeping ----------------------------------------------

  struct WeakGroup {
    int64_t weight = 0;
    int64_t level = 0;
    std::vector<int> rules;
  };

  // Lower bound on reachable cost: accrued true tuples plus all still-possible
  // negative-weight tuples.
  CostVector optimisticCost() {
    CostVector c;
    for (const auto& [key, g] : weakGroups_) {
      int8_t state = F;
      for (int ri : g.rules) {
        BodyEval e = evalBody(gp_.rules[ri]);
        if (e.state == T) {
          state = T;
          break;
        }
        if (e.state == U) state = U;
      }
      if (state == T) c[g.level] += g.weight;
      else if (state == U && g.weight < 0) c[g.level] += g.weight;
    }
    return c;
  }

  // --- search -----------------------------------------------------------------

  struct Dec {
    Atom atom;
    size_t trailMark;
    bool flipped;
  };

  void search() {
    while (true) {
      checkBudget();
      bool ok = propagate() && sweepAndPropagate();
      if (ok && opts_.optimize && hasWeak_ && !models_.empty()) {
        CostVector lb = optimisticCost();
        int cmp = compareCost(lb, best_);
        if (cmp > 0) ok = false;
        else if (cmp == 0 && opts_.maxModels != 0 &&
                 static_cast<int64_t>(models_.size()) >= opts_.maxModels)
          ok = false;
      }
      if (ok) {
        Atom next = pickBranchAtom();
        if (next == 0) {
          ok = onCandidate();
          if (!ok && abort_) return;
        } else {
          decs_.push_back({next, trail_.size(), false});
          assign(next, T);
          continue;
        }
      }
      if (ok) continue;
      // backtrack
      while (true) {
        if (decs_.empty()) return;
        Dec d = decs_.back();
        decs_.pop_back();
        undoTo(d.trailMark);
        if (!d.flipped) {
          decs_.push_back({d.atom, trail_.size(), true});
          assign(d.atom, F);
          break;
        }
      }
    }
  }

  void undoTo(size_t mark) {
    while (trail_.size() > mark) {
      val_[trail_.back()] = U;
      trail_.pop_back();
    }
    queue_.clear();
    pending_.clear();
  }

  Atom pickBranchAtom() {
    for (Atom a = 1; a < static_cast<Atom>(n_); ++a)
      if (val_[a] == U) return a;
    return 0;
  }

  // Full assignment reached: verify, stability-check, record. Returns false
  // to force backtracking (the search continues enumerating).
  bool onCandidate() {
    std::vector<bool> I(n_, false);
    for (Atom a = 1; a < static_cast<Atom>(n_); ++a) I[a] = val_[a] == T;
    for (const GroundRule& r : gp_.rules) {
      if (r.kind == GroundRuleKind::Weak) continue;
      if (!ruleSatisfied(r, I)) return false;
    }
    if (!checkStability(gp_, I)) return false;
    CostVector cost = hasWeak_ ? evalCost(gp_, I) : CostVector{};
    if (opts_.optimize && hasWeak_) {
      if (models_.empty() || compareCost(cost, best_) < 0) {
        best_ = cost;
        models_.clear();
        models_.push_back(makeModel(I, cost));
      } else if (compareCost(cost, best_) == 0 &&
                 (opts_.maxModels == 0 ||
                  static_cast<int64_t>(models_.size()) < opts_.maxModels)) {
        models_.push_back(makeModel(I, cost));
      }
      return false; // keep searching for better models / optimality proof
    }
    models_.push_back(makeModel(I, cost));
    if (opts_.maxModels != 0 && static_cast<int64_t>(models_.size()) >= opts_.maxModels) {
      abort_ = true;
      return false;
    }
    return false;
  }

  static bool litTrueIn(Lit l, const std::vector<bool>& I) {
    return l > 0 ? I[static_cast<size_t>(l)] : !I[static_cast<size_t>(-l)];
  }

  bool ruleSatisfied(const GroundRule& r, const std::vector<bool>& I) const {
    bool body = true;
    for (Lit l : r.body)
      if (!litTrueIn(l, I)) body = false;
    if (body)
      for (const GroundConditional& c : r.conditionals)
        if (conditionalState(c) != T) body = false;
    if (body)
      for (const GroundAggregate& a : r.aggregates)
        if (aggregateState(a) != T) body = false;
    if (!body) return true;
    switch (r.kind) {
      case GroundRuleKind::Constraint:
        return false;
      case GroundRuleKind::Normal:
        return I[r.head[0]];
      case GroundRuleKind::Disjunctive: {
        for (Atom h : r.head)
          if (I[h]) return true;
        return false;
      }
      case GroundRuleKind::Choice: {
        int64_t c = 0;
        for (size_t i = 0; i < r.head.size(); ++i) {
          bool condOk = true;
          if (i < r.headConds.size())
            for (Lit l : r.headConds[i])
              if (!litTrueIn(l, I)) condOk = false;
          if (condOk && I[r.head[i]]) ++c;
        }
        if (c < r.choiceLower) return false;
        if (r.choiceUpper >= 0 && c > r.choiceUpper) return false;
        return true;
      }
      default:
        return true;
    }
  }

  AnswerSet makeModel(const std::vector<bool>& I, CostVector cost) {
    AnswerSet m;
    for (Atom a = 1; a < static_cast<Atom>(n_); ++a)
      if (I[a] && !gp_.internal[a]) m.atoms.insert(gp_.atoms[a]);
    m.cost = std::move(cost);
    return m;
  }

  void attachWitness(SolveResult& res) {
    for (const auto& [p, np] : gp_.complementPairs) {
      if (gp_.fact[p] && gp_.fact[np]) {
        res.inconsistency = {gp_.atoms[p], gp_.atoms[np]};
        return;
      }
    }
  }

  void checkBudget() {
    if (opts_.timeoutMs <= 0) return;
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start_)
                       .count();
    if (elapsed > opts_.timeoutMs) {
      std::string msg = "solve timeout after " + std::to_string(elapsed) + " ms";
      if (!models_.empty() && hasWeak_) {
        msg += "; best-known cost:";
        for (const auto& [l, c] : best_) msg += " " + std::to_string(c) + "@" + std::to_string(l);
      }
      throw SolveError(msg);
    }
  }

  const GroundProgram& gp_;
  SolveOptions opts_;
  size_t n_ = 0;
  std::vector<int8_t> val_;
  std::vector<Atom> trail_;
  std::vector<Dec> decs_;
  std::deque<Atom> queue_;
  std::deque<int> pending_;
  std::vector<std::vector<int>> occ_;
  std::vector<std::vector<int>> supports_;
  std::vector<bool> loopAtom_;
  std::vector<int> loopRules_;
  std::unordered_map<std::string, WeakGroup> weakGroups_;
  std::vector<AnswerSet> models_;
  CostVector best_;
  bool hasWeak_ = false;
  bool hasAgg_ = false;
  bool hasLoops_ = false;
  bool abort_ = false;
  uint64_t ticks_ = 0;
  std::chrono::steady_clock::time_point start_;
};

} // namespace

SolveResult solve(const GroundProgram& gp, const SolveOptions& opts) {
  Solver s(gp, opts);
  return s.run();
}

} // namespace aspen::asp
