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
#include <array>
#include <map>

#include "aspen/kb/modules.h"

namespace aspen::kb {
namespace {

std::string surfaceOf(const asp::Term& t) {
  switch (t.kind) {
    case asp::TermKind::Number: return std::to_string(t.num);
    case asp::TermKind::String: return t.text;
    default: return t.toString();
  }
}

const char* kCountWords[] = {"none", "one",  "two", "three", "four", "five",
                             "six",  "seven", "eight", "nine", "ten"};

std::string countWord(int64_t n) {
  if (n >= 0 && n <= 10) return kCountWords[n];
  return std::to_string(n);
}

std::string directionLetter(const std::string& d) {
  static const std::map<std::string, std::string> m = {
      {"north", "n"}, {"south", "s"}, {"east", "e"}, {"west", "w"}};
  auto it = m.find(d);
  return it == m.end() ? d : it->second;
}

std::string gscanActionName(const std::string& a) {
  if (a == "turn_left") return "turn left";
  if (a == "turn_right") return "turn right";
  return a;
}

} // namespace

std::string stepgameSurfaceLabel(const std::string& engineLabel) {
  static const std::map<std::string, std::string> m = {
      {"top", "above"},          {"down", "below"},
      {"left", "left"},          {"right", "right"},
      {"top_left", "upper-left"}, {"top_right", "upper-right"},
      {"down_left", "lower-left"}, {"down_right", "lower-right"},
      {"overlap", "overlap"}};
  auto it = m.find(engineLabel);
  return it == m.end() ? engineLabel : it->second;
}

Answer extractAnswer(const std::string& task, const asp::SolveResult& result) {
  const TaskProfile& profile = profileFor(task);
  Answer out;
  if (result.status == asp::SolveStatus::Unsat || result.models.empty()) {
    out.kind = Answer::Kind::Unknown;
    out.abstain = true;
    out.surface = "unknown";
    return out;
  }
  const asp::AnswerSet& model = result.models.front();

  std::set<std::string> answerPreds(profile.answerPredicates.begin(),
                                    profile.answerPredicates.end());
  std::vector<asp::Term> answers;
  for (const asp::Term& t : model.atoms) {
    if (t.kind == asp::TermKind::Compound && answerPreds.count(t.text) && t.args.size() == 1)
      answers.push_back(t.args[0]);
  }

  switch (profile.extraction) {
    case ExtractionRule::SingleLabel:
    case ExtractionRule::RelationLabel:
    case ExtractionRule::DirectionLabel: {
      out.kind = Answer::Kind::Label;
      if (answers.empty()) {
        out.abstain = true;
        out.surface = "unknown";
        return out;
      }
      std::set<std::string> distinct;
      for (const asp::Term& a : answers) distinct.insert(surfaceOf(a));
      if (distinct.size() > 1) {
        out.ambiguous = true;
        out.labels = distinct;
        std::string joined;
        for (const auto& s : distinct) joined += (joined.empty() ? "" : "|") + s;
        out.surface = joined;
        return out;
      }
      out.label = *distinct.begin();
      out.surface = profile.extraction == ExtractionRule::DirectionLabel
                        ? stepgameSurfaceLabel(out.label)
                        : out.label;
      return out;
    }
    case ExtractionRule::YesNoMaybe: {
      out.kind = Answer::Kind::Label;
      std::set<std::string> distinct;
      for (const asp::Term& a : answers) distinct.insert(surfaceOf(a));
      if (distinct.empty()) {
        out.abstain = true;
        out.surface = "unknown";
        return out;
      }
      if (distinct.size() > 1) out.ambiguous = true;
      for (const char* pref : {"yes", "maybe", "no"}) {
        if (distinct.count(pref)) {
          out.label = pref;
          out.surface = pref;
          return out;
        }
      }
      out.label = *distinct.begin();
      out.surface = out.label;
      return out;
    }
    case ExtractionRule::CountWord: {
      out.kind = Answer::Kind::Label;
      if (answers.empty()) {
        out.abstain = true;
        out.surface = "unknown";
        return out;
      }
      std::set<std::string> distinct;
      for (const asp::Term& a : answers) distinct.insert(surfaceOf(a));
      if (distinct.size() > 1) {
        out.ambiguous = true;
        out.surface = "ambiguous";
        return out;
      }
      out.label = *distinct.begin();
      out.surface = countWord(answers.front().kind == asp::TermKind::Number
                                  ? answers.front().num
                                  : -1);
      return out;
    }
    case ExtractionRule::ItemSet: {
      out.kind = Answer::Kind::LabelSet;
      for (const asp::Term& a : answers) out.labels.insert(surfaceOf(a));
      if (out.labels.empty()) {
        out.surface = "nothing";
        return out;
      }
      std::string joined;
      for (const auto& s : out.labels) joined += (joined.empty() ? "" : ",") + s;
      out.surface = joined;
      return out;
    }
    case ExtractionRule::ActionSequence: {
      out.kind = Answer::Kind::ActionSequence;
      std::vector<std::pair<int64_t, asp::Term>> timed;
      for (const asp::Term& t : model.atoms) {
        if (t.kind != asp::TermKind::Compound || t.text != "happens" || t.args.size() != 2)
          continue;
        if (t.args[1].kind != asp::TermKind::Number) continue;
        timed.emplace_back(t.args[1].num, t.args[0]);
      }
      std::sort(timed.begin(), timed.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [time, action] : timed) out.actions.push_back(action);
      // strict time ordering with no gaps from 0
      for (size_t i = 0; i < timed.size(); ++i) {
        if (timed[i].first != static_cast<int64_t>(i)) {
          out.ambiguous = true;
          break;
        }
      }
      std::string joined;
      if (task == "babi_19") {
        for (const auto& [time, action] : timed) {
          // happens(action(agent, goto, D), T)
          if (action.args.size() == 3)
            joined += (joined.empty() ? "" : ",") + directionLetter(surfaceOf(action.args[2]));
        }
      } else if (task == "pickplace") {
        int step = 1;
        for (const auto& [time, action] : timed) {
          if (action.args.size() == 4) {
            joined += (joined.empty() ? "" : " ") + std::to_string(step++) + ". Move the " +
                      surfaceOf(action.args[2]) + " onto the " + surfaceOf(action.args[3]) + ".";
          }
        }
      } else {
        for (const auto& [time, action] : timed) {
          if (action.args.size() == 2)
            joined += (joined.empty() ? "" : ", ") + gscanActionName(surfaceOf(action.args[1]));
        }
      }
      out.surface = joined;
      if (out.actions.empty() && task != "gscan") out.abstain = true;
      return out;
    }
  }
  return out;
}

} // namespace aspen::kb
