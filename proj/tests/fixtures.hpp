// Copyright 2026 The Anchorpred Authors.
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


#ifndef ANCHORPRED_TESTS_FIXTURES_HPP_
#define ANCHORPRED_TESTS_FIXTURES_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "anchorpred/corpus.hpp"
#include "json.hpp"

namespace fixtures {

inline std::string path(const std::string &name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json(const std::string &name) {
  return nlohmann::json::parse(read_file(path(name)));
}

inline const anchorpred::Corpus &corpus() {
  static const anchorpred::Corpus c = anchorpred::load_corpus_file(path("corpus.jsonl"));
  return c;
}

inline anchorpred::Corpus corpus_from_string(const std::string &jsonl) {
  std::istringstream in(jsonl);
  return anchorpred::load_corpus(in);
}

inline std::string record(const std::string &id, const std::string &body,
                          const std::string &title = "") {
  nlohmann::json j;
  j["id"] = id;
  j["title"] = title.empty() ? id : title;
  j["body"] = body;
  return j.dump() + "\n";
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("anchorpred_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures

#endif  // ANCHORPRED_TESTS_FIXTURES_HPP_
