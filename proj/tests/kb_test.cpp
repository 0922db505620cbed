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

#include <chrono>
#include <iostream>

#include "aspen/asp/grounder.h"
#include "aspen/asp/parser.h"
#include "aspen/kb/modules.h"

using namespace aspen;
using namespace aspen::kb;

namespace {

nlp::FactSet factsFrom(const std::string& text) {
  nlp::FactSet fs;
  asp::Program p = asp::parseProgram(text, "facts");
  int idx = 0;
  for (const asp::Rule& r : p.rules) fs.insert(r.head[0].atom, idx++);
  return fs;
}

asp::SolveResult runTask(const std::string& task, const nlp::FactSet& facts,
                         bool optimize = false) {
  Composition comp = compose(task, facts);
  asp::GroundProgram gp = asp::ground(comp.program);
  asp::SolveOptions opts;
  opts.maxModels = 1;
  opts.optimize = optimize;
  opts.timeoutMs = 60000;
  return asp::solve(gp, opts);
}

} // namespace

TEST_CASE("registry loads every module byte-stable") {
  const Registry& reg = Registry::instance();
  CHECK(reg.names().size() == 28);
  const KnowledgeModule& loc = reg.get("location");
  CHECK(loc.text.find("offset(") != std::string::npos);
  CHECK(loc.text.find("location(A, Xa, Ya)") != std::string::npos);
  CHECK(reg.get("location").text == loc.text); // byte-stable across calls
  const KnowledgeModule& dec = reg.get("dec");
  CHECK(dec.text.find("holds_at(F,T+1)") != std::string::npos);
  const KnowledgeModule& fam = reg.get("family");
  CHECK(fam.text.find("grandson(A, B) :- grandchild(A, B), male(B).") != std::string::npos);
  CHECK_THROWS_AS(reg.get("nonexistent"), std::out_of_range);
}

TEST_CASE("dependency closure matches the module-task table") {
  const Registry& reg = Registry::instance();
  auto has = [](const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  for (int t : {1, 2, 3, 6, 7, 8, 9, 10, 11, 12, 13, 14, 19}) {
    auto c = reg.closure(profileFor("babi_" + std::to_string(t)).modules);
    CHECK(has(c, "dec"));
    CHECK(has(c, "action"));
  }
  for (const char* t : {"babi_4", "babi_17", "babi_19", "stepgame", "gscan"}) {
    auto c = reg.closure(profileFor(t).modules);
    CHECK(has(c, "location"));
  }
  CHECK(has(reg.closure(profileFor("clutrr").modules), "family"));
  auto pp = reg.closure(profileFor("pickplace").modules);
  CHECK(has(pp, "dec"));
  CHECK(has(pp, "action"));
  // dependencies come before dependents
  auto c = reg.closure(profileFor("babi_1").modules);
  CHECK(c.front() == "dec");
  CHECK(c.back() == "babi_task_1");
}

TEST_CASE("stepgame single hop derives the answer") {
  nlp::FactSet fs = factsFrom("top_right(\"C\",\"D\"). query(\"C\",\"D\").");
  asp::SolveResult r = runTask("stepgame", fs);
  Answer a = extractAnswer("stepgame", r);
  CHECK(a.label == "top_right");
  CHECK(a.surface == "upper-right");
}

TEST_CASE("stepgame multi hop with noise") {
  // C is top_right of D, D is right of E; noise: F left of C. query (C,E)
  nlp::FactSet fs = factsFrom(
      "top_right(\"C\",\"D\"). right(\"D\",\"E\"). left(\"F\",\"C\"). query(\"C\",\"E\").");
  asp::SolveResult r = runTask("stepgame", fs);
  Answer a = extractAnswer("stepgame", r);
  CHECK(a.surface == "upper-right"); // offsets (1,1)+(1,0) = (2,1) -> signs (1,1)
}

TEST_CASE("babi task 1 DEC forward simulation") {
  nlp::FactSet fs;
  fs.insert(asp::parseGroundAtom("go(mary,bathroom)"), 0);
  fs.insert(asp::parseGroundAtom("go(mary,kitchen)"), 1);
  fs.insert(asp::parseGroundAtom("whereAgent(mary)"), -1);
  asp::SolveResult r = runTask("babi_1", fs);
  Answer a = extractAnswer("babi_1", r);
  CHECK(a.surface == "kitchen");
}

TEST_CASE("clutrr derives grandson") {
  nlp::FactSet fs = factsFrom(
      "brother(\"Raquel\",\"Casey\"). grandmother(\"Raquel\",\"Karen\"). "
      "query(\"Karen\",\"Casey\").");
  asp::SolveResult r = runTask("clutrr", fs);
  Answer a = extractAnswer("clutrr", r);
  CHECK(a.surface == "grandson");
}

TEST_CASE("location symmetry: is(A,R,B) iff is(B,R',A) with negated offsets") {
  const Registry& reg = Registry::instance();
  std::string base = reg.get("location").text;
  const char* rels[] = {"top",      "down",      "left",      "right",   "top_left",
                        "top_right", "down_left", "down_right", "overlap"};
  const char* inverse[] = {"down",     "top",       "right",    "left",    "down_right",
                           "down_left", "top_right", "top_left", "overlap"};
  for (int i = 0; i < 9; ++i) {
    std::string text = base + "\nis(a, " + rels[i] + ", b).";
    asp::Program p = asp::parseProgram(text, "sym");
    asp::GroundProgram gp = asp::ground(p);
    asp::SolveResult r = asp::solve(gp, {.maxModels = 1});
    REQUIRE(r.models.size() == 1);
    std::string want = std::string("is(b,") + inverse[i] + ",a)";
    bool found = false;
    for (const asp::Term& t : r.models[0].atoms)
      if (t.toString() == want) found = true;
    CHECK_MESSAGE(found, "missing ", want);
  }
}

TEST_CASE("pickplace solves a short plan") {
  auto t0 = std::chrono::steady_clock::now();
  nlp::FactSet fs = factsFrom(R"(
    feature("red block",block). feature("green block",block).
    feature("blue block",block). feature("yellow block",block).
    on("red block","table",0). on("green block","red block",0).
    on("blue block","table",0). on("yellow block","blue block",0).
    on("green block","table"). on("red block","green block").
    on("yellow block","table"). on("blue block","yellow block").
  )");
  asp::SolveResult r = runTask("pickplace", fs, /*optimize=*/true);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cout << "[timing] pickplace 4-step plan: " << ms << " ms\n";
  REQUIRE(r.status == asp::SolveStatus::OptimumFound);
  Answer a = extractAnswer("pickplace", r);
  CHECK(a.actions.size() == 4);
}

TEST_CASE("gscan walk east") {
  auto t0 = std::chrono::steady_clock::now();
  nlp::FactSet fs = factsFrom(R"(
    gridSize(4). pos(agent,(2,0)). dir(agent,east).
    pos(o1,(2,3)). shape(o1,circle). color(o1,yellow). size(o1,2).
    query(walk). queryDesc(yellow). queryDesc(circle).
  )");
  asp::SolveResult r = runTask("gscan", fs, /*optimize=*/true);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cout << "[timing] gscan walk-east plan: " << ms << " ms\n";
  REQUIRE(r.status == asp::SolveStatus::OptimumFound);
  Answer a = extractAnswer("gscan", r);
  CHECK(a.surface == "walk, walk, walk");
}

TEST_CASE("compose warns about unknown fact predicates") {
  nlp::FactSet fs = factsFrom("top_right(\"C\",\"D\"). query(\"C\",\"D\"). bogus(\"x\").");
  Composition comp = compose("stepgame", fs);
  REQUIRE(comp.warnings.size() == 1);
  CHECK(comp.warnings[0].find("bogus/1") != std::string::npos);
  CHECK_THROWS_AS(profileFor("not_a_task"), std::out_of_range);
}

TEST_CASE("extract answers map surfaces") {
  // UNSAT -> abstain
  asp::SolveResult unsat;
  unsat.status = asp::SolveStatus::Unsat;
  Answer a = extractAnswer("stepgame", unsat);
  CHECK(a.abstain);
  CHECK(a.surface == "unknown");
}

TEST_CASE("validate_modules reports a clean registry") {
  auto issues = validateModules();
  int errors = 0;
  for (const auto& i : issues) {
    if (i.severity == "error") {
      ++errors;
      std::cout << "[validate] " << i.module << ": " << i.message << "\n";
    }
  }
  CHECK(errors == 0);
}
