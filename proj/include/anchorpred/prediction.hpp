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

#ifndef ANCHORPRED_PREDICTION_HPP_
#define ANCHORPRED_PREDICTION_HPP_

#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "anchorpred/error.hpp"
#include "anchorpred/text.hpp"
#include "json.hpp"

namespace anchorpred {

struct Prediction {
  std::string example_id;
  std::size_t chosen_index = 0;
  std::vector<double> scores;  // aligned with the example's candidates
  std::optional<std::string> url;

  bool operator==(const Prediction &) const = default;
};

// Global tie rule: the lowest index among the maximal scores.
inline std::size_t argmax_lowest(std::span<const double> scores) {
  if (scores.empty()) throw ContractError("argmax of an empty score list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

inline Prediction make_prediction(std::string example_id, std::vector<double> scores) {
  Prediction p;
  p.example_id = std::move(example_id);
  p.chosen_index = argmax_lowest(scores);
  p.scores = std::move(scores);
  return p;
}

inline nlohmann::ordered_json prediction_to_json(const Prediction &p) {
  nlohmann::ordered_json j;
  j["example_id"] = p.example_id;
  j["chosen_index"] = p.chosen_index;
  j["scores"] = p.scores;
  if (p.url) j["url"] = *p.url;
  return j;
}

inline Prediction prediction_from_json(const nlohmann::json &j) {
  Prediction p;
  p.example_id = j.at("example_id").get<std::string>();
  p.chosen_index = j.at("chosen_index").get<std::size_t>();
  if (j.contains("scores")) p.scores = j["scores"].get<std::vector<double>>();
  if (j.contains("url")) p.url = j["url"].get<std::string>();
  return p;
}

inline void write_predictions(std::ostream &out, const std::vector<Prediction> &preds) {
  for (const Prediction &p : preds) out << prediction_to_json(p).dump() << '\n';
}

inline std::vector<Prediction> read_predictions(std::istream &in) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(prediction_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("bad prediction record: ") + e.what(), line_no);
    }
  }
  return out;
}

inline std::vector<Prediction> read_predictions_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions file '" + path + "'");
  return read_predictions(in);
}

}  // namespace anchorpred

#endif  // ANCHORPRED_PREDICTION_HPP_
