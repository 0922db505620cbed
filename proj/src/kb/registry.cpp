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

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "aspen/kb/modules.h"

namespace aspen::kb {

std::string assetDir() {
  if (const char* env = std::getenv("ASPEN_ASSETS")) return env;
  return ASPEN_ASSET_DIR;
}

Registry::Registry(const std::string& dir) {
  std::ifstream in(dir + "/modules/manifest.json");
  if (!in) throw std::runtime_error("cannot open module manifest under " + dir);
  nlohmann::json manifest = nlohmann::json::parse(in);
  for (const auto& m : manifest.at("modules")) {
    KnowledgeModule km;
    km.name = m.at("name").get<std::string>();
    for (const auto& d : m.at("deps")) km.deps.push_back(d.get<std::string>());
    std::ifstream mf(dir + "/modules/" + m.at("path").get<std::string>());
    if (!mf) throw std::runtime_error("missing module file for " + km.name);
    std::ostringstream ss;
    ss << mf.rdbuf();
    km.text = ss.str();
    order_.push_back(km.name);
    modules_.emplace(km.name, std::move(km));
  }
}

const KnowledgeModule& Registry::get(const std::string& name) const {
  auto it = modules_.find(name);
  if (it == modules_.end()) throw std::out_of_range("unknown knowledge module: " + name);
  return it->second;
}

std::vector<std::string> Registry::names() const { return order_; }

std::vector<std::string> Registry::closure(const std::vector<std::string>& roots) const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    if (seen.count(n)) return;
    seen.insert(n);
    const KnowledgeModule& m = get(n);
    for (const std::string& d : m.deps) visit(d);
    out.push_back(n);
  };
  for (const std::string& r : roots) visit(r);
  return out;
}

const Registry& Registry::instance() {
  static Registry reg(assetDir());
  return reg;
}

} // namespace aspen::kb
