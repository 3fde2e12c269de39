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

#ifndef ANCHORPRED_STATS_HPP_
#define ANCHORPRED_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "anchorpred/corpus.hpp"
#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "json.hpp"

namespace anchorpred {

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // population
};

inline MeanSd mean_sd(const std::vector<double> &xs) {
  if (xs.empty()) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

struct StatsReport {
  std::string dataset;
  std::size_t n_examples = 0;
  MeanSd unique_relevant;
  MeanSd candidates;
  MeanSd anchor_position;
  MeanSd source_tokens;
  MeanSd link_position;
};

// Normalized position of index i among n candidates; 0.5 when n == 1.
inline double normalized_position(std::size_t index, std::size_t n) {
  if (n <= 1) return 0.5;
  return static_cast<double>(index) / static_cast<double>(n - 1);
}

// Anchor position averages over an example's relevant indices first, then
// over examples.
inline StatsReport dataset_statistics(const Dataset &dataset, const Corpus &corpus) {
  std::vector<double> relevant, candidates, position, tokens, link_pos;
  for (const Example &ex : dataset.examples) {
    const Article *source = corpus.find(ex.link.source_id);
    if (source == nullptr) {
      throw DataError("example '" + ex.example_id + "': source article '" +
                      ex.link.source_id + "' not in corpus");
    }
    const std::size_t n = ex.candidates.size();
    relevant.push_back(static_cast<double>(ex.relevant.size()));
    candidates.push_back(static_cast<double>(n));
    double pos = 0.0;
    for (std::size_t r : ex.relevant) pos += normalized_position(r, n);
    position.push_back(ex.relevant.empty() ? 0.5 : pos / static_cast<double>(ex.relevant.size()));
    tokens.push_back(static_cast<double>(count_tokens(source->text)));
    link_pos.push_back(source->text.empty()
                           ? 0.0
                           : static_cast<double>(ex.link.span.begin) /
                                 static_cast<double>(source->text.size()));
  }
  StatsReport r;
  r.dataset = dataset.name;
  r.n_examples = dataset.examples.size();
  r.unique_relevant = mean_sd(relevant);
  r.candidates = mean_sd(candidates);
  r.anchor_position = mean_sd(position);
  r.source_tokens = mean_sd(tokens);
  r.link_position = mean_sd(link_pos);
  return r;
}

inline nlohmann::ordered_json stats_to_json(const StatsReport &r) {
  auto ms = [](const MeanSd &m) { return nlohmann::ordered_json{{"mean", m.mean}, {"sd", m.sd}}; };
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["n_examples"] = r.n_examples;
  j["unique_relevant_anchors"] = ms(r.unique_relevant);
  j["candidate_anchors"] = ms(r.candidates);
  j["relevant_anchor_position"] = ms(r.anchor_position);
  j["source_tokens"] = ms(r.source_tokens);
  j["link_position"] = ms(r.link_position);
  return j;
}

inline std::string render_stats(const StatsReport &r) {
  auto row = [](const char *label, const std::string &value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-27s %s\n", label, value.c_str());
    return std::string(buf);
  };
  auto fmt = [](const MeanSd &m, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f \xC2\xB1 %.*f", digits, m.mean, digits, m.sd);
    return std::string(buf);
  };
  std::string out = row("", r.dataset);
  out += row("# Examples", std::to_string(r.n_examples));
  out += row("# Unique Relevant Anchors", fmt(r.unique_relevant, 1));
  out += row("# Candidate Anchors", fmt(r.candidates, 1));
  out += row("Relevant Anchor Position", fmt(r.anchor_position, 2));
  out += row("# Source Tokens", fmt(r.source_tokens, 0));
  out += row("Link Position", fmt(r.link_position, 2));
  return out;
}

// --- Annotator agreement ---

inline constexpr const char *kNoAnchor = "none";

// Categorical label for one annotator's choice on one example.
inline std::string annotation_label(const std::vector<std::size_t> &choice) {
  if (choice.empty()) return kNoAnchor;
  std::vector<std::size_t> sorted = choice;
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (std::size_t i : sorted) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(i);
  }
  return out;
}

// (p_o - p_e) / (1 - p_e), p_e from each annotator's marginals. Defined as
// 1 when p_e == 1.
inline double cohen_kappa(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  if (a.size() != b.size()) throw ContractError("kappa: label sequences differ in length");
  if (a.empty()) throw ContractError("kappa: empty label sequences");
  const double n = static_cast<double>(a.size());
  std::map<std::string, double> ma, mb;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1.0;
    mb[b[i]] += 1.0;
    if (a[i] == b[i]) agree += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto &[label, count] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) pe += (count / n) * (it->second / n);
  }
  if (pe >= 1.0) return 1.0;
  return (po - pe) / (1.0 - pe);
}

struct KappaSummary {
  double mean_kappa = 0.0;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> pairs;
  std::size_t skipped = 0;  // examples with fewer than two annotators
};

// Mean Cohen's kappa over annotator pairs, each pair scored on the examples
// both annotated.
inline KappaSummary mean_pairwise_kappa(const Dataset &annotations) {
  KappaSummary s;
  std::size_t annotators = 0;
  for (const Example &ex : annotations.examples) {
    if (ex.relevant_by_annotator.size() < 2) {
      ++s.skipped;
      continue;
    }
    annotators = std::max(annotators, ex.relevant_by_annotator.size());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < annotators; ++i) {
    for (std::size_t j = i + 1; j < annotators; ++j) {
      std::vector<std::string> a, b;
      for (const Example &ex : annotations.examples) {
        const auto &by = ex.relevant_by_annotator;
        if (by.size() < 2 || by.size() <= j) continue;
        a.push_back(annotation_label(by[i]));
        b.push_back(annotation_label(by[j]));
      }
      if (a.empty()) continue;
      const double k = cohen_kappa(a, b);
      s.pairs.push_back({{i, j}, k});
      total += k;
    }
  }
  if (s.pairs.empty()) throw DataError("kappa: no example has two or more annotators");
  s.mean_kappa = total / static_cast<double>(s.pairs.size());
  return s;
}

struct AgreementHistogram {
  std::map<std::size_t, std::size_t> distinct_anchors;  // distinct labels -> examples
  std::map<std::size_t, std::size_t> max_agreement;     // largest label count -> examples
  std::size_t examples = 0;
  std::size_t skipped = 0;
};

// "none" counts as a label of its own.
inline AgreementHistogram agreement_distribution(const Dataset &annotations) {
  AgreementHistogram h;
  for (const Example &ex : annotations.examples) {
    if (ex.relevant_by_annotator.size() < 2) {
      ++h.skipped;
      continue;
    }
    std::map<std::string, std::size_t> counts;
    for (const auto &choice : ex.relevant_by_annotator) ++counts[annotation_label(choice)];
    std::size_t best = 0;
    for (const auto &[label, c] : counts) best = std::max(best, c);
    ++h.distinct_anchors[counts.size()];
    ++h.max_agreement[best];
    ++h.examples;
  }
  return h;
}

inline nlohmann::ordered_json agreement_to_json(const AgreementHistogram &h) {
  nlohmann::ordered_json j;
  j["examples"] = h.examples;
  j["skipped"] = h.skipped;
  j["distinct_anchors"] = nlohmann::ordered_json::object();
  for (const auto &[k, v] : h.distinct_anchors) j["distinct_anchors"][std::to_string(k)] = v;
  j["max_agreement"] = nlohmann::ordered_json::object();
  for (const auto &[k, v] : h.max_agreement) j["max_agreement"][std::to_string(k)] = v;
  return j;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_STATS_HPP_
