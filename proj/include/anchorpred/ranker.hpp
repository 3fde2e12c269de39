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

#ifndef ANCHORPRED_RANKER_HPP_
#define ANCHORPRED_RANKER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "anchorpred/bm25.hpp"
#include "anchorpred/corpus.hpp"
#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/hash.hpp"
#include "anchorpred/prediction.hpp"
#include "anchorpred/text.hpp"

namespace anchorpred {

// A ranker failed on a particular example.
class RankError : public Error {
 public:
  RankError(const std::string &example_id, const std::string &message)
      : Error("example '" + example_id + "': " + message), example_id_(example_id) {}
  const std::string &example_id() const { return example_id_; }

 private:
  std::string example_id_;
};

class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual std::string name() const = 0;
  virtual Prediction rank(const Example &ex) const = 0;

  virtual std::vector<Prediction> rank_all(std::span<const Example> examples) const {
    std::vector<Prediction> out;
    out.reserve(examples.size());
    for (const Example &ex : examples) out.push_back(rank(ex));
    return out;
  }
};

namespace ranker_internal {

inline void check_prediction(const Example &ex, const Prediction &p) {
  if (p.example_id != ex.example_id) throw RankError(ex.example_id, "prediction id mismatch");
  if (p.chosen_index >= ex.candidates.size()) {
    throw RankError(ex.example_id, "chosen index out of range");
  }
  if (p.scores.size() != ex.candidates.size()) {
    throw RankError(ex.example_id, "score count does not match candidate count");
  }
}

}  // namespace ranker_internal

// Runs `ranker` on one example; failures carry the example id.
inline Prediction rank(const Ranker &ranker, const Example &ex) {
  Prediction p;
  try {
    p = ranker.rank(ex);
  } catch (const RankError &) {
    throw;
  } catch (const std::exception &e) {
    throw RankError(ex.example_id, ranker.name() + ": " + e.what());
  }
  ranker_internal::check_prediction(ex, p);
  return p;
}

inline std::vector<Prediction> rank_all(const Ranker &ranker,
                                        std::span<const Example> examples) {
  std::vector<Prediction> out;
  try {
    out = ranker.rank_all(examples);
  } catch (const RankError &) {
    throw;
  } catch (const std::exception &e) {
    throw RankError(examples.empty() ? "" : examples.front().example_id,
                    ranker.name() + ": " + e.what());
  }
  if (out.size() != examples.size()) throw Error(ranker.name() + ": prediction count mismatch");
  for (std::size_t i = 0; i < out.size(); ++i) {
    ranker_internal::check_prediction(examples[i], out[i]);
  }
  return out;
}

class Bm25Ranker : public Ranker {
 public:
  Bm25Ranker(const Corpus &corpus, QueryMode mode, Bm25Params params = {},
             std::size_t window_tokens = 50)
      : corpus_(corpus), mode_(mode), params_(params), window_(window_tokens) {}

  std::string name() const override {
    return mode_ == QueryMode::kTitle ? "bm25-title" : "bm25-context";
  }

  Prediction rank(const Example &ex) const override {
    return rank_bm25(ex, corpus_.at(ex.link.target_id), corpus_.find(ex.link.source_id),
                     mode_, window_, params_);
  }

 private:
  const Corpus &corpus_;
  QueryMode mode_;
  Bm25Params params_;
  std::size_t window_;
};

// How often each candidate index is relevant across the training split.
struct TrainStats {
  std::map<std::size_t, std::size_t> index_counts;

  static TrainStats from_dataset(const Dataset &d) {
    TrainStats s;
    for (const Example &ex : d.examples) {
      if (ex.split != Split::kTrain) continue;
      for (std::size_t r : ex.relevant) ++s.index_counts[r];
    }
    return s;
  }
};

inline Prediction majority_rank(const TrainStats &stats, const Example &ex) {
  if (stats.index_counts.empty()) throw DataError("majority baseline: empty training stats");
  std::vector<double> scores(ex.candidates.size(), 0.0);
  for (const auto &[index, count] : stats.index_counts) {
    if (index < scores.size()) scores[index] = static_cast<double>(count);
  }
  return make_prediction(ex.example_id, std::move(scores));
}

class MajorityRanker : public Ranker {
 public:
  explicit MajorityRanker(TrainStats stats) : stats_(std::move(stats)) {
    if (stats_.index_counts.empty()) {
      throw DataError("majority baseline: empty training stats");
    }
  }
  std::string name() const override { return "majority"; }
  Prediction rank(const Example &ex) const override { return majority_rank(stats_, ex); }

 private:
  TrainStats stats_;
};

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view key) {
  return std::mt19937_64(hash_u64(std::to_string(seed) + '\x1f' + std::string(key)));
}

// Uniform choice, reproducible per (seed, example_id). Scores are one-hot.
inline Prediction random_rank(std::uint64_t seed, const Example &ex) {
  if (ex.candidates.empty()) throw ContractError("example has no candidates");
  auto rng = seeded_rng(seed, ex.example_id);
  std::uniform_int_distribution<std::size_t> pick(0, ex.candidates.size() - 1);
  std::vector<double> scores(ex.candidates.size(), 0.0);
  scores[pick(rng)] = 1.0;
  return make_prediction(ex.example_id, std::move(scores));
}

class RandomRanker : public Ranker {
 public:
  explicit RandomRanker(std::uint64_t seed) : seed_(seed) {}
  std::string name() const override { return "random"; }
  Prediction rank(const Example &ex) const override { return random_rank(seed_, ex); }

 private:
  std::uint64_t seed_;
};

// Picks the first relevant index; an upper bound used for sanity checks.
class OracleRanker : public Ranker {
 public:
  std::string name() const override { return "oracle"; }
  Prediction rank(const Example &ex) const override {
    std::vector<double> scores(ex.candidates.size(), 0.0);
    if (!ex.relevant.empty()) scores[ex.relevant.front()] = 1.0;
    return make_prediction(ex.example_id, std::move(scores));
  }
};

// --- Query serialization ---

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct QueryLimits {
  std::size_t title_tokens = kUnlimited;
  std::size_t lead_tokens = 64;
  std::size_t context_window = 50;  // tokens per side of the link
  std::size_t candidate_tokens = 256;
};

// First `max_tokens` tokens of `text` with whitespace collapsed.
inline std::string truncate_tokens(std::string_view text, std::size_t max_tokens) {
  if (max_tokens == kUnlimited) return collapse_whitespace(text);
  const std::vector<Span> spans = token_spans(text);
  if (spans.size() <= max_tokens) return collapse_whitespace(text);
  if (max_tokens == 0) return {};
  return collapse_whitespace(text.substr(0, spans[max_tokens - 1].end));
}

inline std::string join_heading_path(const std::vector<std::string> &path) {
  std::string out;
  for (const auto &h : path) {
    if (!out.empty()) out.append(" > ");
    out.append(h);
  }
  return out;
}

inline constexpr std::array<std::string_view, 8> kQueryLabels = {
    "source_title:", "target_title:", "source_lead:", "target_lead:",
    "context:",      "source_heading:", "candidate:", "candidate_heading:"};

// Labeled text for one (link, candidate) pair: titles, leads, link context,
// the link's section heading, the candidate and the candidate's heading.
inline std::string serialize_query(const Example &ex, std::size_t candidate_index,
                                   const Corpus &corpus, const QueryLimits &limits = {}) {
  if (candidate_index >= ex.candidates.size()) {
    throw ContractError("candidate index out of range");
  }
  const Article &source = corpus.at(ex.link.source_id);
  const Article &target = corpus.at(ex.link.target_id);
  const CandidateAnchor &cand = ex.candidates[candidate_index];

  auto lead_of = [&](const Article &a) {
    const auto lead = lead_paragraph(a);
    return lead ? truncate_tokens(slice(a.text, *lead), limits.lead_tokens) : std::string();
  };
  std::string source_heading;
  if (auto s = section_containing(source, ex.link.span)) {
    source_heading = join_heading_path(source.sections[*s].heading_path);
  }
  const std::array<std::string, 8> values = {
      truncate_tokens(source.title, limits.title_tokens),
      truncate_tokens(target.title, limits.title_tokens),
      lead_of(source),
      lead_of(target),
      collapse_whitespace(link_context(source, ex.link, limits.context_window)),
      source_heading,
      truncate_tokens(slice(target.text, cand.span), limits.candidate_tokens),
      join_heading_path(cand.section_heading_path),
  };
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out.append(kQueryLabels[i]);
    if (!values[i].empty()) out.append(" ").append(values[i]);
  }
  return out;
}

// --- Listwise training data ---

struct TrainingList {
  std::string example_id;
  std::vector<std::size_t> candidate_indices;
  std::vector<int> labels;  // exactly one 1
  std::vector<std::string> queries;
  bool with_replacement = false;
};

// One list per relevant index: the positive plus m-1 negatives drawn without
// replacement, or every negative plus draws with replacement when there are
// fewer than m-1. List order is shuffled.
inline std::vector<TrainingList> sample_list_indices(const Example &ex, std::size_t m,
                                                     std::uint64_t seed) {
  if (m < 2) throw ContractError("list size must be at least 2");
  if (ex.relevant.empty()) throw DataError("example '" + ex.example_id + "' has no relevant");
  std::vector<std::size_t> negatives;
  for (std::size_t i = 0; i < ex.candidates.size(); ++i) {
    if (!std::binary_search(ex.relevant.begin(), ex.relevant.end(), i)) negatives.push_back(i);
  }
  if (negatives.empty()) {
    throw DataError("example '" + ex.example_id + "' has no non-relevant candidates");
  }
  std::vector<TrainingList> lists;
  for (std::size_t k = 0; k < ex.relevant.size(); ++k) {
    auto rng = seeded_rng(seed, ex.example_id + '\x1f' + std::to_string(k));
    TrainingList list;
    list.example_id = ex.example_id;
    std::vector<std::size_t> picked = negatives;
    std::shuffle(picked.begin(), picked.end(), rng);
    if (picked.size() >= m - 1) {
      picked.resize(m - 1);
    } else {
      list.with_replacement = true;
      std::uniform_int_distribution<std::size_t> draw(0, negatives.size() - 1);
      while (picked.size() < m - 1) picked.push_back(negatives[draw(rng)]);
    }
    std::vector<std::pair<std::size_t, int>> items;
    items.emplace_back(ex.relevant[k], 1);
    for (std::size_t n : picked) items.emplace_back(n, 0);
    std::shuffle(items.begin(), items.end(), rng);
    for (const auto &[index, label] : items) {
      list.candidate_indices.push_back(index);
      list.labels.push_back(label);
    }
    lists.push_back(std::move(list));
  }
  return lists;
}

inline std::vector<TrainingList> sample_training_lists(const Example &ex, const Corpus &corpus,
                                                       std::size_t m, std::uint64_t seed,
                                                       const QueryLimits &limits = {}) {
  std::vector<TrainingList> lists = sample_list_indices(ex, m, seed);
  for (TrainingList &list : lists) {
    for (std::size_t index : list.candidate_indices) {
      list.queries.push_back(serialize_query(ex, index, corpus, limits));
    }
  }
  return lists;
}

inline nlohmann::ordered_json training_list_to_json(const TrainingList &l) {
  nlohmann::ordered_json j;
  j["example_id"] = l.example_id;
  j["candidate_indices"] = l.candidate_indices;
  j["labels"] = l.labels;
  j["queries"] = l.queries;
  j["with_replacement"] = l.with_replacement;
  return j;
}

struct LossResult {
  double loss = 0.0;
  std::vector<double> gradient;  // d loss / d score
};

// Softmax cross-entropy over one list, computed with a max shift:
// loss = -sum_i y_i (s_i - logsumexp(s)), grad_i = (sum_j y_j) p_i - y_i.
inline LossResult listwise_softmax_loss(std::span<const double> labels,
                                        std::span<const double> scores) {
  if (labels.size() != scores.size()) throw ContractError("labels/scores length mismatch");
  if (scores.empty()) throw ContractError("empty list");
  double label_sum = 0.0;
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw ContractError("labels must be binary");
    label_sum += y;
  }
  if (label_sum == 0.0) throw ContractError("list has no positive label");

  const double shift = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double s : scores) z += std::exp(s - shift);
  const double log_z = shift + std::log(z);

  LossResult r;
  r.gradient.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double p = std::exp(scores[i] - log_z);
    r.loss -= labels[i] * (scores[i] - log_z);
    r.gradient[i] = label_sum * p - labels[i];
  }
  return r;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_RANKER_HPP_
