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

#include "aspen/asp/external.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "aspen/asp/parser.h"

namespace aspen::asp {
namespace {

std::string shellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  out += "'";
  return out;
}

int runCommand(const std::string& cmd, const std::string& input, std::string* output) {
  // write input to a temp file, run `cmd < file`, capture stdout+stderr
  char inPath[] = "/tmp/aspen_ext_in_XXXXXX";
  int fd = mkstemp(inPath);
  if (fd < 0) throw ExternalError("cannot create temp file");
  FILE* f = fdopen(fd, "w");
  fwrite(input.data(), 1, input.size(), f);
  fclose(f);
  std::string full = cmd + " < " + shellQuote(inPath) + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) {
    remove(inPath);
    throw ExternalError("cannot spawn solver: " + cmd);
  }
  std::array<char, 4096> buf;
  output->clear();
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output->append(buf.data(), got);
  int status = pclose(pipe);
  remove(inPath);
  return status;
}

} // namespace

SolveResult solveExternal(const std::string& programText, const std::string& solverCmd,
                          const SolveOptions& opts) {
  if (solverCmd.empty()) throw ExternalError("no solver command given");
  std::ostringstream cmd;
  cmd << solverCmd;
  cmd << " --models " << (opts.optimize ? 0 : opts.maxModels);
  if (opts.optimize) cmd << " --opt-mode=optN";
  if (opts.timeoutMs > 0) cmd << " --time-limit=" << std::max<int64_t>(1, opts.timeoutMs / 1000);
  cmd << " -"; // read program from stdin

  std::string out;
  int status = runCommand(cmd.str(), programText, &out);
  int exitCode = -1;
  if (status >= 0) exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  // clingo exit codes are bitmasks: 10 SAT, 20 UNSAT, 30 SAT+exhausted; 127 = not found
  if (exitCode == 127) throw ExternalError("solver not found: " + solverCmd);
  bool recognized = exitCode == 10 || exitCode == 20 || exitCode == 30 || exitCode == 0;
  if (!recognized)
    throw ExternalError("solver exited with status " + std::to_string(exitCode) + ": " +
                        out.substr(0, 400));

  SolveResult res;
  std::istringstream is(out);
  std::string line;
  bool expectAtoms = false;
  bool sawVerdict = false;
  AnswerSet current;
  std::vector<AnswerSet> models;
  CostVector lastCost;
  auto parseAtomsLine = [](const std::string& s) {
    std::set<Term> atoms;
    std::istringstream ls(s);
    std::string tok;
    // atoms may contain spaces only inside quotes; split carefully
    std::string cur;
    int depth = 0;
    bool inStr = false;
    for (char c : s) {
      if (c == '"' ) inStr = !inStr;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ' ' && depth == 0 && !inStr) {
        if (!cur.empty()) {
          atoms.insert(parseGroundAtom(cur));
          cur.clear();
        }
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) atoms.insert(parseGroundAtom(cur));
    return atoms;
  };
  try {
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.rfind("Answer:", 0) == 0) {
        expectAtoms = true;
        continue;
      }
      if (expectAtoms) {
        expectAtoms = false;
        current.atoms = parseAtomsLine(line);
        current.cost.clear();
        models.push_back(current);
        continue;
      }
      if (line.rfind("Optimization:", 0) == 0) {
        std::istringstream ls(line.substr(13));
        std::vector<int64_t> costs;
        int64_t v;
        while (ls >> v) costs.push_back(v);
        lastCost.clear();
        // clingo prints highest priority first
        int64_t level = static_cast<int64_t>(costs.size());
        for (int64_t c : costs) lastCost[--level + 1] = c; // levels N..1 descending
        if (!models.empty()) models.back().cost = lastCost;
        continue;
      }
      if (line == "SATISFIABLE") {
        res.status = SolveStatus::Sat;
        sawVerdict = true;
      } else if (line == "UNSATISFIABLE") {
        res.status = SolveStatus::Unsat;
        sawVerdict = true;
      } else if (line == "OPTIMUM FOUND") {
        res.status = SolveStatus::OptimumFound;
        sawVerdict = true;
      }
    }
  } catch (const ParseError& e) {
    throw ExternalError(std::string("unparseable solver output: ") + e.what());
  }
  if (!sawVerdict) throw ExternalError("solver output lacks a verdict: " + out.substr(0, 400));
  if (res.status == SolveStatus::OptimumFound) {
    res.optimum = lastCost;
    // keep only optimal models (clingo with optN prints intermediate ones too)
    std::vector<AnswerSet> opt;
    for (AnswerSet& m : models) {
      if (m.cost.empty()) m.cost = lastCost;
      if (compareCost(m.cost, lastCost) == 0) opt.push_back(std::move(m));
    }
    models = std::move(opt);
  }
  res.models = std::move(models);
  return res;
}

std::string findExternalSolver() {
  for (const char* cand : {"clingo", "clasp"}) {
    std::string out;
    std::string cmd = std::string("command -v ") + cand + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) continue;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == ' ')) out.pop_back();
    if (!out.empty()) return cand; // found on PATH
  }
  return "";
}

} // namespace aspen::asp
