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

#ifndef ANCHORPRED_BM25_HPP_
#define ANCHORPRED_BM25_HPP_

#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anchorpred/corpus.hpp"
#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/prediction.hpp"
#include "anchorpred/text.hpp"

namespace anchorpred {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

// Okapi BM25 over one example's candidate paragraphs.
class Bm25Index {
 public:
  Bm25Index(std::vector<std::vector<std::string>> docs, Bm25Params params = {})
      : params_(params) {
    if (docs.empty()) throw ContractError("BM25 index needs at least one candidate");
    std::size_t total = 0;
    for (const auto &doc : docs) {
      std::unordered_map<std::string, std::size_t> tf;
      for (const auto &tok : doc) ++tf[tok];
      for (const auto &[term, count] : tf) ++df_[term];
      lengths_.push_back(doc.size());
      total += doc.size();
      tf_.push_back(std::move(tf));
    }
    if (total == 0) throw DataError("BM25 index: every candidate is empty");
    avg_length_ = static_cast<double>(total) / static_cast<double>(docs.size());
  }

  static Bm25Index from_texts(std::span<const std::string> texts, Bm25Params params = {}) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(texts.size());
    for (const auto &t : texts) docs.push_back(tokenize(t));
    return Bm25Index(std::move(docs), params);
  }

  std::size_t size() const { return lengths_.size(); }
  std::size_t length(std::size_t doc) const { return lengths_.at(doc); }
  double average_length() const { return avg_length_; }
  const Bm25Params &params() const { return params_; }

  std::size_t document_frequency(const std::string &term) const {
    auto it = df_.find(term);
    return it == df_.end() ? 0 : it->second;
  }

  std::size_t term_frequency(std::size_t doc, const std::string &term) const {
    const auto &tf = tf_.at(doc);
    auto it = tf.find(term);
    return it == tf.end() ? 0 : it->second;
  }

  double idf(const std::string &term) const {
    const double n = static_cast<double>(size());
    const double df = static_cast<double>(document_frequency(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  }

  // Sums over distinct query terms; repeated query tokens count once.
  double score(std::span<const std::string> query, std::size_t doc) const {
    if (doc >= size()) throw ContractError("BM25 candidate index out of range");
    const std::set<std::string_view> terms(query.begin(), query.end());
    const double norm = params_.k1 * (1.0 - params_.b +
                                      params_.b * static_cast<double>(lengths_[doc]) /
                                          avg_length_);
    double total = 0.0;
    for (std::string_view t : terms) {
      const std::string term(t);
      const double tf = static_cast<double>(term_frequency(doc, term));
      if (tf == 0.0) continue;
      total += idf(term) * (tf * (params_.k1 + 1.0)) / (tf + norm);
    }
    return total;
  }

  std::vector<double> score_all(std::span<const std::string> query) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = score(query, i);
    return out;
  }

 private:
  Bm25Params params_;
  std::vector<std::unordered_map<std::string, std::size_t>> tf_;
  std::unordered_map<std::string, std::size_t> df_;
  std::vector<std::size_t> lengths_;
  double avg_length_ = 0.0;
};

enum class QueryMode { kTitle, kContext };

inline std::vector<std::string> candidate_texts(const Example &ex, const Article &target) {
  std::vector<std::string> out;
  out.reserve(ex.candidates.size());
  for (const CandidateAnchor &c : ex.candidates) {
    if (c.span.end > target.text.size()) {
      throw DataError("candidate span outside target '" + target.id + "'");
    }
    out.emplace_back(slice(target.text, c.span));
  }
  return out;
}

inline std::size_t lead_candidate(const Example &ex) {
  for (const CandidateAnchor &c : ex.candidates) {
    if (c.is_lead) return c.index;
  }
  return 0;
}

// BM25-Title / BM25-Context. All-zero scores fall back to the lead.
inline Prediction rank_bm25(const Example &ex, const Article &target,
                            const Article *source, QueryMode mode,
                            std::size_t window_tokens = 50, Bm25Params params = {}) {
  if (source == nullptr) {
    throw ContractError("BM25 ranking of '" + ex.example_id + "' needs the source article");
  }
  const std::vector<std::string> query =
      mode == QueryMode::kTitle ? tokenize(source->title)
                                : tokenize(link_context(*source, ex.link, window_tokens));
  const auto texts = candidate_texts(ex, target);
  const Bm25Index index = Bm25Index::from_texts(texts, params);
  std::vector<double> scores = index.score_all(query);
  Prediction p = make_prediction(ex.example_id, std::move(scores));
  bool any_positive = false;
  for (double s : p.scores) any_positive = any_positive || s > 0.0;
  if (!any_positive) p.chosen_index = lead_candidate(ex);
  return p;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_BM25_HPP_
