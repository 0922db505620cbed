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

#include <map>
#include <stdexcept>

#include "aspen/kb/modules.h"

namespace aspen::kb {
namespace {

std::map<std::string, TaskProfile> buildProfiles() {
  std::map<std::string, TaskProfile> out;
  auto add = [&](TaskProfile p) { out.emplace(p.task, std::move(p)); };

  auto babi = [&](int n, ExtractionRule ex, std::vector<std::string> stamped,
                  Timestamping ts = Timestamping::SentenceIndex,
                  ParseMode pm = ParseMode::PerSentence) {
    TaskProfile p;
    p.task = "babi_" + std::to_string(n);
    p.modules = {"babi_task_" + std::to_string(n)};
    p.extraction = ex;
    p.stamping = ts;
    p.stampedPredicates = std::move(stamped);
    p.parseMode = pm;
    add(std::move(p));
  };

  babi(1, ExtractionRule::SingleLabel, {"go", "pickup", "drop"});
  babi(2, ExtractionRule::SingleLabel, {"go", "pickup", "drop"});
  babi(3, ExtractionRule::SingleLabel, {"go", "pickup", "drop"});
  babi(4, ExtractionRule::SingleLabel, {}, Timestamping::None);
  babi(5, ExtractionRule::SingleLabel, {"go", "pickup", "drop", "gave"});
  babi(6, ExtractionRule::YesNoMaybe, {"go", "pickup", "drop"});
  babi(7, ExtractionRule::CountWord, {"go", "pickup", "drop", "gave"});
  babi(8, ExtractionRule::ItemSet, {"go", "pickup", "drop", "gave"});
  babi(9, ExtractionRule::YesNoMaybe, {"go", "pickup", "drop"});
  babi(10, ExtractionRule::YesNoMaybe, {"go", "isIn", "isEither", "move"});
  babi(11, ExtractionRule::SingleLabel, {"go"}, Timestamping::SentenceIndex,
       ParseMode::WholeStory);
  babi(12, ExtractionRule::SingleLabel, {"go"});
  babi(13, ExtractionRule::SingleLabel, {"go"}, Timestamping::SentenceIndex,
       ParseMode::WholeStory);
  babi(14, ExtractionRule::SingleLabel, {}, Timestamping::ParserSupplied);
  babi(15, ExtractionRule::SingleLabel, {}, Timestamping::None);
  babi(16, ExtractionRule::SingleLabel, {}, Timestamping::None);
  babi(17, ExtractionRule::YesNoMaybe, {}, Timestamping::None, ParseMode::WholeStory);
  babi(18, ExtractionRule::YesNoMaybe, {}, Timestamping::None);
  babi(19, ExtractionRule::ActionSequence, {}, Timestamping::None);
  babi(20, ExtractionRule::SingleLabel, {}, Timestamping::None);

  TaskProfile sg;
  sg.task = "stepgame";
  sg.modules = {"stepgame"};
  sg.extraction = ExtractionRule::DirectionLabel;
  add(std::move(sg));

  TaskProfile cl;
  cl.task = "clutrr";
  cl.modules = {"clutrr"};
  cl.extraction = ExtractionRule::RelationLabel;
  cl.parseMode = ParseMode::WholeStory;
  add(std::move(cl));

  TaskProfile gs;
  gs.task = "gscan";
  gs.modules = {"gscan"};
  gs.extraction = ExtractionRule::ActionSequence;
  gs.solveTimeoutMs = 60000;
  add(std::move(gs));

  TaskProfile pp;
  pp.task = "pickplace";
  pp.modules = {"pickplace"};
  pp.extraction = ExtractionRule::ActionSequence;
  pp.solveTimeoutMs = 60000;
  add(std::move(pp));

  return out;
}

const std::map<std::string, TaskProfile>& profiles() {
  static std::map<std::string, TaskProfile> p = buildProfiles();
  return p;
}

} // namespace

const TaskProfile& profileFor(const std::string& task) {
  auto it = profiles().find(task);
  if (it == profiles().end()) throw std::out_of_range("no profile for task: " + task);
  return it->second;
}

std::vector<std::string> allTasks() {
  std::vector<std::string> out;
  for (const auto& [k, _] : profiles()) out.push_back(k);
  return out;
}

} // namespace aspen::kb
