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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "aspen/asp/external.h"
#include "aspen/asp/grounder.h"
#include "aspen/asp/parser.h"
#include "aspen/asp/solver.h"

using namespace aspen::asp;

namespace {

SolveResult solveText(const std::string& text, SolveOptions opts = {}) {
  Program p = parseProgram(text, "test");
  GroundProgram gp = ground(p);
  return solve(gp, opts);
}

std::set<std::string> modelStrings(const AnswerSet& m) {
  std::set<std::string> out;
  for (const Term& t : m.atoms) out.insert(t.toString());
  return out;
}

std::set<std::set<std::string>> modelFamily(const SolveResult& r) {
  std::set<std::set<std::string>> fam;
  for (const AnswerSet& m : r.models) fam.insert(modelStrings(m));
  return fam;
}

// Brute-force oracle: enumerate all subsets filtered by checkStability.
std::set<std::set<std::string>> bruteForce(const GroundProgram& gp) {
  std::set<std::set<std::string>> fam;
  size_t n = gp.atomCount();
  REQUIRE(n <= 22);
  for (uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::vector<bool> I(n + 1, false);
    for (size_t i = 0; i < n; ++i) I[i + 1] = (mask >> i) & 1;
    bool consistent = true;
    for (auto [p, q] : gp.complementPairs)
      if (I[p] && I[q]) consistent = false;
    if (!consistent) continue;
    if (checkStability(gp, I)) {
      std::set<std::string> atoms;
      for (size_t i = 1; i <= n; ++i)
        if (I[i] && !gp.internal[i]) atoms.insert(gp.atoms[i].toString());
      fam.insert(atoms);
    }
  }
  return fam;
}

} // namespace

TEST_CASE("terms print canonically") {
  Term t = Term::compound("action", {Term::symbol("robot"), Term::symbol("pick_and_place"),
                                     Term::string("red block"), Term::string("table")});
  CHECK(t.toString() == "action(robot,pick_and_place,\"red block\",\"table\")");
  Term tup = Term::compound("pos", {Term::symbol("agent"),
                                    Term::tuple({Term::number(2), Term::number(3)})});
  CHECK(tup.toString() == "pos(agent,(2,3))");
}

TEST_CASE("parser handles facts and comments") {
  Program p = parseProgram("go(max, bathroom). % a comment\n%* block\ncomment *% went(x).", "t");
  CHECK(p.rules.size() == 2);
  CHECK(p.rules[0].toString() == "go(max,bathroom).");
}

TEST_CASE("empty input gives empty program") {
  Program p = parseProgram("", "t");
  CHECK(p.rules.empty());
}

TEST_CASE("pooling expands to separate facts") {
  Program p = parseProgram("offset(overlap,0,0; top,0,1).", "t");
  REQUIRE(p.rules.size() == 2);
  CHECK(p.rules[0].toString() == "offset(overlap,0,0).");
  CHECK(p.rules[1].toString() == "offset(top,0,1).");
}

TEST_CASE("parser rejects unsupported constructs by name") {
  CHECK_THROWS_WITH_AS(parseProgram("f(X) :- g(X), X=@foo(X).", "t"),
                       doctest::Contains("@-function"), ParseError);
  CHECK_THROWS_AS(parseProgram("p(X) :- q(Y).", "t"), ParseError);
  try {
    parseProgram("p(X) :- q(Y).", "t");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("'X'") != std::string::npos);
  }
  CHECK_THROWS_AS(parseProgram("#sum{1:a}.", "t"), ParseError);
}

TEST_CASE("parser accepts weak constraints with default level") {
  Program p = parseProgram(":~ maxtime(M). [M]\n:~ happens(E, T). [1@0, E, T]", "t");
  REQUIRE(p.rules.size() == 2);
  CHECK(p.rules[0].kind == RuleKind::Weak);
  CHECK(p.rules[0].level.num == 0);
}

TEST_CASE("interval facts expand") {
  SolveResult r = solveText("p(1..3).");
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]) == std::set<std::string>{"p(1)", "p(2)", "p(3)"});
}

TEST_CASE("location rule single hop") {
  // offsets per the location module; one is/3 edge from facts
  const char* prog = R"(
    nums(-100..100).
    offset(overlap,0,0; top,0,1; down,0,-1; left,-1,0; right,1,0;
           top_left,-1,1; top_right,1,1; down_left,-1,-1; down_right,1,-1).
    is("C", top_right, "D").
    location("D", 0, 0).
    location(A, Xa, Ya) :-
        location(B, Xb, Yb), nums(Xa), nums(Ya),
        is(A, Kind, B), offset(Kind, Dx, Dy),
        Xa-Xb=Dx, Ya-Yb=Dy.
  )";
  SolveResult r = solveText(prog);
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("location(\"C\",1,1)") == 1);
}

TEST_CASE("choice rule over interval") {
  SolveResult r = solveText("{maxtime(M): M=0..10} = 1.", {.maxModels = 0});
  CHECK(r.models.size() == 11);
}

TEST_CASE("two answer sets for even loop") {
  SolveResult r = solveText("a :- not b. b :- not a.", {.maxModels = 0});
  std::set<std::set<std::string>> expect{{"a"}, {"b"}};
  CHECK(modelFamily(r) == expect);
}

TEST_CASE("facts-only program has one model equal to the facts") {
  SolveResult r = solveText("p(1). q(a). r(\"s\").", {.maxModels = 0});
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]) == std::set<std::string>{"p(1)", "q(a)", "r(\"s\")"});
}

TEST_CASE("stability examples from the contract") {
  Program p = parseProgram("a :- not b.", "t");
  GroundProgram gp = ground(p);
  Atom a = gp.idOf(Term::symbol("a"));
  REQUIRE(a != 0);
  std::vector<bool> I(gp.atoms.size(), false);
  I[a] = true;
  CHECK(checkStability(gp, I));
  Atom b = gp.idOf(Term::symbol("b"));
  if (b != 0) {
    std::vector<bool> J(gp.atoms.size(), false);
    J[a] = J[b] = true;
    CHECK_FALSE(checkStability(gp, J));
  }
  Program p2 = parseProgram("a.", "t");
  GroundProgram gp2 = ground(p2);
  std::vector<bool> empty(gp2.atoms.size(), false);
  CHECK_FALSE(checkStability(gp2, empty));
}

TEST_CASE("strong negation rejects inconsistent sets") {
  SolveResult r = solveText("p(1). -p(1).", {.maxModels = 0});
  CHECK(r.status == SolveStatus::Unsat);
  REQUIRE(r.inconsistency.has_value());
  SolveResult r2 = solveText("p(1). -p(2).", {.maxModels = 0});
  CHECK(r2.models.size() == 1);
  CHECK(modelStrings(r2.models[0]) == std::set<std::string>{"-p(2)", "p(1)"});
}

TEST_CASE("constraints prune models") {
  SolveResult r = solveText("{a; b}. :- a, b. :- not a, not b.", {.maxModels = 0});
  std::set<std::set<std::string>> expect{{"a"}, {"b"}};
  CHECK(modelFamily(r) == expect);
}

TEST_CASE("disjunction requires minimality") {
  SolveResult r = solveText("a; b.", {.maxModels = 0});
  std::set<std::set<std::string>> expect{{"a"}, {"b"}};
  CHECK(modelFamily(r) == expect);
  // shifted: a derivable, so disjunct b not free
  SolveResult r2 = solveText("a; b. a :- b. b :- a.", {.maxModels = 0});
  std::set<std::set<std::string>> expect2{{"a", "b"}};
  CHECK(modelFamily(r2) == expect2);
}

TEST_CASE("aggregates count distinct tuples") {
  SolveResult r = solveText(R"(
    carry(a, i1). carry(a, i2). query(a).
    answer(N) :- query(A), N = #count{I: carry(A, I)}.
  )");
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("answer(2)") == 1);
}

TEST_CASE("cardinality bounds in body") {
  SolveResult r = solveText(R"(
    p(1). p(2).
    ok :- 2{p(X): p(X)}.
    no :- 3{p(X): p(X)}.
  )");
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("ok") == 1);
  CHECK(modelStrings(r.models[0]).count("no") == 0);
}

TEST_CASE("conditional literal in body") {
  // T greatest among q times
  SolveResult r = solveText(R"(
    q(1). q(3). q(2).
    latest(T) :- q(T), T >= Tx: q(Tx).
  )");
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("latest(3)") == 1);
  CHECK(modelStrings(r.models[0]).count("latest(1)") == 0);
}

TEST_CASE("weak constraints optimize lexicographically") {
  const char* prog = R"(
    {a; b} = 1.
    :~ a. [3@1]
    :~ b. [1@1]
    :~ b. [5@0, tag]
  )";
  SolveResult r = solveText(prog, {.maxModels = 1, .optimize = true});
  CHECK(r.status == SolveStatus::OptimumFound);
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]) == std::set<std::string>{"b"});
  CHECK(r.optimum.at(1) == 1);
  CHECK(r.optimum.at(0) == 5);
}

TEST_CASE("weak constraint tuples contribute once per distinct tuple") {
  const char* prog = R"(
    a. b.
    :~ a. [1@0, x]
    :~ b. [1@0, x]
    :~ b. [2@0, y]
  )";
  Program p = parseProgram(prog, "t");
  GroundProgram gp = ground(p);
  SolveResult r = solve(gp, {.maxModels = 1, .optimize = true});
  REQUIRE(r.status == SolveStatus::OptimumFound);
  CHECK(r.optimum.at(0) == 3); // x counted once, y once
}

TEST_CASE("negative weights accumulate per distinct tuple") {
  const char* prog = R"(
    p(1..3).
    :~ p(T). [-T@1, goal]
  )";
  SolveResult r = solveText(prog, {.maxModels = 1, .optimize = true});
  REQUIRE(r.status == SolveStatus::OptimumFound);
  CHECK(r.optimum.at(1) == -6);
}

TEST_CASE("soundness: every returned answer set is stable") {
  const char* prog = R"(
    {p(1..4)}.
    q(X) :- p(X), not r(X).
    r(X) :- p(X), X > 2.
    :- q(1), q(2).
  )";
  Program p = parseProgram(prog, "t");
  GroundProgram gp = ground(p);
  SolveResult r = solve(gp, {.maxModels = 0});
  CHECK(!r.models.empty());
  for (const AnswerSet& m : r.models) {
    std::vector<bool> I(gp.atoms.size(), false);
    for (const Term& t : m.atoms) {
      Atom id = gp.idOf(t);
      REQUIRE(id != 0);
      I[id] = true;
    }
    CHECK(checkStability(gp, I));
  }
}

TEST_CASE("random ground normal programs match brute force") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 60; ++iter) {
    int nAtoms = 3 + static_cast<int>(rng() % 6);
    int nRules = 2 + static_cast<int>(rng() % 10);
    std::ostringstream prog;
    for (int i = 0; i < nRules; ++i) {
      int head = static_cast<int>(rng() % nAtoms);
      prog << "a" << head << " :- ";
      int len = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < len; ++j) {
        if (j) prog << ", ";
        if (rng() % 2) prog << "not ";
        prog << "a" << rng() % nAtoms;
      }
      prog << ".\n";
    }
    if (rng() % 2) prog << "a0.\n";
    Program p = parseProgram(prog.str(), "rnd");
    GroundProgram gp = ground(p);
    SolveResult r = solve(gp, {.maxModels = 0});
    auto fam = modelFamily(r);
    auto expect = bruteForce(gp);
    CHECK(fam == expect);
  }
}

TEST_CASE("naive and optimized grounding agree") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 25; ++iter) {
    std::ostringstream prog;
    int nConsts = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < nConsts; ++i) prog << "d(c" << i << ").\n";
    prog << "p(X) :- d(X), not q(X).\n";
    prog << "q(X) :- d(X), not p(X).\n";
    if (rng() % 2) prog << "r(X) :- p(X).\n";
    Program p = parseProgram(prog.str(), "rnd");
    GroundOptions naive;
    naive.naive = true;
    SolveResult a = solve(ground(p), {.maxModels = 0});
    SolveResult b = solve(ground(p, naive), {.maxModels = 0});
    CHECK(modelFamily(a) == modelFamily(b));
  }
}

TEST_CASE("grounding cap raises a resource error") {
  GroundOptions opts;
  opts.maxGroundRules = 10;
  Program p = parseProgram("n(1..100). e(X,Y) :- n(X), n(Y).", "big");
  CHECK_THROWS_AS(ground(p, opts), GroundError);
}

TEST_CASE("const definitions substitute and reject redefinition") {
  SolveResult r = solveText("#const k=3. p(k).");
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("p(3)") == 1);
  CHECK_THROWS_AS(parseProgram("#const k=1. #const k=2.", "t"), ParseError);
  // caller-supplied override wins
  Program p = parseProgram("#const k=3. p(k).", "t");
  GroundOptions opts;
  opts.constantBindings["k"] = Term::number(7);
  SolveResult r2 = solve(ground(p, opts));
  CHECK(modelStrings(r2.models[0]).count("p(7)") == 1);
}

TEST_CASE("anonymous variables project under negation") {
  const char* prog = R"(
    p(1, a). p(2, b).
    q(1..3).
    lonely(X) :- q(X), not p(X, _).
  )";
  SolveResult r = solveText(prog);
  REQUIRE(r.models.size() == 1);
  CHECK(modelStrings(r.models[0]).count("lonely(3)") == 1);
  CHECK(modelStrings(r.models[0]).count("lonely(1)") == 0);
}

TEST_CASE("arithmetic binding in builtins") {
  SolveResult r = solveText("base(5). shifted(Y) :- base(X), Y = X + 2.");
  CHECK(modelStrings(r.models[0]).count("shifted(7)") == 1);
  SolveResult r2 = solveText("base(5). shifted(Y) :- base(X), Y - X = 2.");
  CHECK(modelStrings(r2.models[0]).count("shifted(7)") == 1);
  SolveResult r3 = solveText("p(X) :- q(X), |X - 3| = 1. q(1..5).");
  CHECK(modelStrings(r3.models[0]).count("p(2)") == 1);
  CHECK(modelStrings(r3.models[0]).count("p(4)") == 1);
  CHECK(modelStrings(r3.models[0]).count("p(3)") == 0);
}

TEST_CASE("stratified program equals bottom-up fixpoint") {
  const char* prog = R"(
    edge(1,2). edge(2,3). edge(3,4).
    reach(1).
    reach(Y) :- reach(X), edge(X,Y).
    unreachable(X) :- node(X), not reach(X).
    node(1..5).
  )";
  SolveResult r = solveText(prog);
  REQUIRE(r.models.size() == 1);
  auto m = modelStrings(r.models[0]);
  CHECK(m.count("reach(4)") == 1);
  CHECK(m.count("unreachable(5)") == 1);
  CHECK(m.count("unreachable(1)") == 0);
}

TEST_CASE("solve_external parses a stub solver") {
  // stub emits clingo-shaped output
  std::string stub = "/tmp/aspen_stub_solver.sh";
  {
    FILE* f = fopen(stub.c_str(), "w");
    fputs("#!/bin/sh\ncat > /dev/null\n"
          "echo 'Answer: 1'\necho 'a b(1) c(\"x y\")'\necho SATISFIABLE\n",
          f);
    fclose(f);
  }
  std::string cmd = "sh " + stub;
  SolveResult r = solveExternal("a. b(1). c(\"x y\").", cmd, {.maxModels = 1});
  CHECK(r.status == SolveStatus::Sat);
  REQUIRE(r.models.size() == 1);
  CHECK(r.models[0].atoms.count(Term::symbol("a")) == 1);
  CHECK(r.models[0].atoms.count(Term::compound("c", {Term::string("x y")})) == 1);
  CHECK_THROWS_AS(solveExternal("a.", "/nonexistent/solver-binary", {}), ExternalError);
}

TEST_CASE("timeout raises a resource error") {
  // a hard combinatorial program with a tiny budget
  std::ostringstream prog;
  prog << "{";
  for (int i = 0; i < 30; ++i) prog << (i ? "; " : "") << "x" << i;
  prog << "}.\n";
  for (int i = 0; i < 28; ++i)
    prog << ":- x" << i << ", x" << (i + 1) << ", not x" << (i + 2) << ".\n";
  Program p = parseProgram(prog.str(), "t");
  GroundProgram gp = ground(p);
  CHECK_THROWS_AS(solve(gp, {.maxModels = 0, .timeoutMs = 30}), SolveError);
}
