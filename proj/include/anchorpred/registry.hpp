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

#ifndef ANCHORPRED_REGISTRY_HPP_
#define ANCHORPRED_REGISTRY_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anchorpred/bm25.hpp"
#include "anchorpred/corpus.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/ranker.hpp"
#include "anchorpred/scorer.hpp"

namespace anchorpred {

struct RankerConfig {
  std::string name;
  Bm25Params bm25;
  std::size_t window_tokens = 50;
  std::uint64_t seed = 0;
  std::optional<TrainStats> train_stats;  // majority
  ScorerOptions scorer;                   // external
  QueryLimits limits;                     // external
};

class UnknownRankerError : public Error {
 public:
  using Error::Error;
};

inline const std::vector<std::string> &available_rankers() {
  static const std::vector<std::string> kNames = {"bm25-title", "bm25-context", "majority",
                                                  "random",     "oracle",       "external"};
  return kNames;
}

inline std::unique_ptr<Ranker> make_ranker(const RankerConfig &config, const Corpus &corpus) {
  const std::string &n = config.name;
  if (n == "bm25-title" || n == "bm25-context") {
    return std::make_unique<Bm25Ranker>(
        corpus, n == "bm25-title" ? QueryMode::kTitle : QueryMode::kContext, config.bm25,
        config.window_tokens);
  }
  if (n == "majority") {
    if (!config.train_stats) throw DataError("majority ranker needs training statistics");
    return std::make_unique<MajorityRanker>(*config.train_stats);
  }
  if (n == "random") return std::make_unique<RandomRanker>(config.seed);
  if (n == "oracle") return std::make_unique<OracleRanker>();
  if (n == "external") {
    if (config.scorer.endpoint.empty()) throw ContractError("external ranker needs an endpoint");
    return std::make_unique<ExternalRanker>(corpus, config.scorer, config.limits);
  }
  std::string names;
  for (const auto &a : available_rankers()) names += (names.empty() ? "" : ", ") + a;
  throw UnknownRankerError("unknown ranker '" + n + "'; available: " + names);
}

}  // namespace anchorpred

#endif  // ANCHORPRED_REGISTRY_HPP_
