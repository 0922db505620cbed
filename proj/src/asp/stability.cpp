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
#include <functional>
#include <unordered_set>

#include "aspen/asp/solver.h"

namespace aspen::asp {
namespace {

bool litTrue(Lit l, const std::vector<bool>& I) {
  return l > 0 ? I[static_cast<size_t>(l)] : !I[static_cast<size_t>(-l)];
}

bool plainBodyTrue(const std::vector<Lit>& body, const std::vector<bool>& I) {
  for (Lit l : body)
    if (!litTrue(l, I)) return false;
  return true;
}

bool conditionalTrue(const GroundConditional& c, const std::vector<bool>& I) {
  for (const GroundCondInstance& inst : c.instances) {
    bool condHolds = true;
    for (Lit l : inst.cond)
      if (!litTrue(l, I)) {
        condHolds = false;
        break;
      }
    if (!condHolds) continue;
    if (inst.then == 0) return false; // head certainly false
    if (!litTrue(inst.then, I)) return false;
  }
  return true;
}

int64_t aggCount(const GroundAggregate& a, const std::vector<bool>& I) {
  std::unordered_set<std::string> keys;
  for (const GroundAggElement& el : a.elements) {
    bool ok = true;
    for (Lit l : el.cond)
      if (!litTrue(l, I)) {
        ok = false;
        break;
      }
    if (ok) keys.insert(el.tupleKey);
  }
  return static_cast<int64_t>(keys.size());
}

bool aggregateTrue(const GroundAggregate& a, const std::vector<bool>& I) {
  int64_t n = aggCount(a, I);
  if (a.lower != GroundAggregate::kNoBound && n < a.lower) return false;
  if (a.upper != GroundAggregate::kNoBound && n > a.upper) return false;
  if (a.notEqual != GroundAggregate::kNoBound && n == a.notEqual) return false;
  return true;
}

// Non-positive body parts evaluated against the candidate (they are treated
// as external facts of the reduct); positive plain literals excluded.
bool externalsTrue(const GroundRule& r, const std::vector<bool>& I) {
  for (Lit l : r.body)
    if (l < 0 && !litTrue(l, I)) return false;
  for (const GroundConditional& c : r.conditionals)
    if (!conditionalTrue(c, I)) return false;
  for (const GroundAggregate& a : r.aggregates)
    if (!aggregateTrue(a, I)) return false;
  return true;
}

bool wholeBodyTrue(const GroundRule& r, const std::vector<bool>& I) {
  return plainBodyTrue(r.body, I) && externalsTrue(r, I);
}

std::vector<Lit> positivePart(const GroundRule& r) {
  std::vector<Lit> out;
  for (Lit l : r.body)
    if (l > 0) out.push_back(l);
  return out;
}

} // namespace

int compareCost(const CostVector& a, const CostVector& b) {
  std::set<int64_t> levels;
  for (const auto& [l, _] : a) levels.insert(l);
  for (const auto& [l, _] : b) levels.insert(l);
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    int64_t va = a.count(*it) ? a.at(*it) : 0;
    int64_t vb = b.count(*it) ? b.at(*it) : 0;
    if (va != vb) return va < vb ? -1 : 1;
  }
  return 0;
}

bool checkStability(const GroundProgram& gp, const std::vector<bool>& candidate) {
  const size_t n = gp.atoms.size();
  if (candidate.size() != n) return false;

  struct DefiniteRule {
    Atom head;
    std::vector<Lit> body; // positive atoms only
  };
  std::vector<DefiniteRule> definite;
  struct DisjRule {
    std::vector<Atom> heads; // restricted to candidate members
    std::vector<Lit> body;
  };
  std::vector<DisjRule> disjunctive;

  for (const GroundRule& r : gp.rules) {
    switch (r.kind) {
      case GroundRuleKind::Weak:
        continue;
      case GroundRuleKind::Constraint: {
        if (wholeBodyTrue(r, candidate)) return false;
        continue;
      }
      case GroundRuleKind::Normal: {
        if (wholeBodyTrue(r, candidate) && !candidate[r.head[0]]) return false;
        if (externalsTrue(r, candidate)) {
          std::vector<Lit> pos = positivePart(r);
          bool inCandidate = true;
          for (Lit l : pos)
            if (!candidate[l]) inCandidate = false;
          if (inCandidate) definite.push_back({r.head[0], std::move(pos)});
        }
        continue;
      }
      case GroundRuleKind::Disjunctive: {
        if (wholeBodyTrue(r, candidate)) {
          bool some = false;
          for (Atom h : r.head) some = some || candidate[h];
          if (!some) return false;
        }
        if (externalsTrue(r, candidate)) {
          std::vector<Lit> pos = positivePart(r);
          bool inCandidate = true;
          for (Lit l : pos)
            if (!candidate[l]) inCandidate = false;
          if (!inCandidate) continue;
          DisjRule d;
          d.body = std::move(pos);
          for (Atom h : r.head)
            if (candidate[h]) d.heads.push_back(h);
          if (d.heads.empty()) return false; // body ⊆ I but no head in I
          disjunctive.push_back(std::move(d));
        }
        continue;
      }
      case GroundRuleKind::Choice: {
        auto memberCondTrue = [&](size_t i) {
          if (i >= r.headConds.size()) return true;
          for (Lit l : r.headConds[i])
            if (!litTrue(l, candidate)) return false;
          return true;
        };
        if (wholeBodyTrue(r, candidate)) {
          int64_t cnt = 0;
          for (size_t i = 0; i < r.head.size(); ++i)
            if (memberCondTrue(i) && candidate[r.head[i]]) ++cnt;
          if (cnt < r.choiceLower) return false;
          if (r.choiceUpper >= 0 && cnt > r.choiceUpper) return false;
        }
        // Reduct: candidate members whose element condition holds are
        // self-supported when the body holds within the candidate; positive
        // condition atoms join the definite body.
        if (externalsTrue(r, candidate)) {
          std::vector<Lit> pos = positivePart(r);
          bool inCandidate = true;
          for (Lit l : pos)
            if (!candidate[l]) inCandidate = false;
          if (!inCandidate) continue;
          for (size_t i = 0; i < r.head.size(); ++i) {
            if (!candidate[r.head[i]] || !memberCondTrue(i)) continue;
            std::vector<Lit> body = pos;
            if (i < r.headConds.size())
              for (Lit l : r.headConds[i])
                if (l > 0) body.push_back(l);
            definite.push_back({r.head[i], std::move(body)});
          }
        }
        continue;
      }
    }
  }

  // Least closure of the definite part (restricted to the candidate).
  std::vector<bool> closure(n, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const DefiniteRule& d : definite) {
      if (closure[d.head]) continue;
      bool fire = true;
      for (Lit l : d.body)
        if (!closure[l]) {
          fire = false;
          break;
        }
      if (fire) {
        closure[d.head] = true;
        changed = true;
      }
    }
  }
  auto closureEqualsCandidate = [&](const std::vector<bool>& cl) {
    for (size_t i = 1; i < n; ++i)
      if (cl[i] != candidate[i]) return cl[i] && !candidate[i] ? false : false;
    return true;
  };
  (void)closureEqualsCandidate;

  // closure ⊆ candidate must hold (bodies restricted to candidate).
  size_t closureSize = 0, candidateSize = 0;
  for (size_t i = 1; i < n; ++i) {
    if (closure[i]) {
      ++closureSize;
      if (!candidate[i]) return false; // cannot happen by construction
    }
    if (candidate[i]) ++candidateSize;
  }

  if (disjunctive.empty()) return closureSize == candidateSize;

  if (closureSize == candidateSize) return true;

  // Minimality with disjunction: search for a model J with closure ⊆ J ⊂ I.
  // DFS over disjunctive head choices, closing under the definite part.
  std::function<bool(std::vector<bool>&)> findSmaller = [&](std::vector<bool>& J) -> bool {
    // close under definite rules
    bool grow = true;
    while (grow) {
      grow = false;
      for (const DefiniteRule& d : definite) {
        if (J[d.head]) continue;
        bool fire = true;
        for (Lit l : d.body)
          if (!J[l]) {
            fire = false;
            break;
          }
        if (fire) {
          J[d.head] = true;
          grow = true;
        }
      }
    }
    // find an unsatisfied disjunctive rule
    for (const DisjRule& d : disjunctive) {
      bool bodyIn = true;
      for (Lit l : d.body)
        if (!J[l]) {
          bodyIn = false;
          break;
        }
      if (!bodyIn) continue;
      bool sat = false;
      for (Atom h : d.heads)
        if (J[h]) sat = true;
      if (sat) continue;
      // branch on each head choice
      for (Atom h : d.heads) {
        std::vector<bool> J2 = J;
        J2[h] = true;
        if (findSmaller(J2)) return true;
      }
      return false; // every choice fails to yield a smaller model
    }
    // J is a model of the reduct: smaller than the candidate?
    for (size_t i = 1; i < n; ++i)
      if (candidate[i] && !J[i]) return true;
    return false;
  };
  std::vector<bool> J = closure;
  return !findSmaller(J);
}

bool checkStability(const GroundProgram& gp, const std::set<Term>& candidate) {
  std::vector<bool> I(gp.atoms.size(), false);
  for (const Term& t : candidate) {
    Atom id = gp.idOf(t);
    if (!id) return false; // outside the atom table
    I[id] = true;
  }
  return checkStability(gp, I);
}

CostVector evalCost(const GroundProgram& gp, const std::vector<bool>& candidate) {
  std::unordered_set<std::string> seen;
  CostVector cost;
  for (const GroundRule& r : gp.rules) {
    if (r.kind != GroundRuleKind::Weak) continue;
    if (!wholeBodyTrue(r, candidate)) continue;
    if (!seen.insert(r.tupleKey).second) continue;
    cost[r.level] += r.weight;
  }
  return cost;
}

} // namespace aspen::asp
