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

#ifndef ANCHORPRED_EVALUATOR_HPP_
#define ANCHORPRED_EVALUATOR_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/prediction.hpp"
#include "json.hpp"

namespace anchorpred {

struct DecileRow {
  std::size_t decile = 0;
  std::size_t min_candidates = 0;
  std::size_t max_candidates = 0;
  std::size_t n_examples = 0;
  std::size_t n_correct = 0;
};

struct EvalReport {
  std::string dataset;
  std::string ranker;
  std::size_t n_examples = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  std::vector<std::pair<std::string, bool>> per_example;  // sorted by id
  std::vector<DecileRow> deciles;                          // by candidate count
};

// Multi-acceptance accuracy: a prediction is correct when it hits any
// relevant index (for reader annotations, the union over annotators).
inline EvalReport evaluate(const std::vector<Prediction> &predictions, const Dataset &dataset,
                           const std::string &ranker_name = "") {
  std::map<std::string, const Prediction *> by_id;
  std::set<std::string> duplicates;
  for (const Prediction &p : predictions) {
    if (!by_id.emplace(p.example_id, &p).second) duplicates.insert(p.example_id);
  }
  std::set<std::string> dataset_ids;
  std::vector<std::string> missing;
  for (const Example &ex : dataset.examples) {
    dataset_ids.insert(ex.example_id);
    if (by_id.count(ex.example_id) == 0) missing.push_back(ex.example_id);
  }
  std::vector<std::string> unknown;
  for (const auto &[id, p] : by_id) {
    if (dataset_ids.count(id) == 0) unknown.push_back(id);
  }
  if (!duplicates.empty() || !missing.empty() || !unknown.empty()) {
    std::ostringstream msg;
    msg << "predictions do not align with dataset '" << dataset.name << "'";
    auto list = [&](const char *what, const auto &ids) {
      if (ids.empty()) return;
      msg << "; " << what << ":";
      for (const auto &id : ids) msg << ' ' << id;
    };
    list("duplicate ids", duplicates);
    list("missing ids", missing);
    list("unknown ids", unknown);
    throw DataError(msg.str());
  }

  EvalReport r;
  r.dataset = dataset.name;
  r.ranker = ranker_name;
  r.n_examples = dataset.examples.size();
  struct Row {
    std::size_t candidates;
    std::string id;
    bool correct;
  };
  std::vector<Row> rows;
  for (const Example &ex : dataset.examples) {
    const Prediction &p = *by_id.at(ex.example_id);
    const bool correct =
        std::binary_search(ex.relevant.begin(), ex.relevant.end(), p.chosen_index);
    if (correct) ++r.n_correct;
    rows.push_back({ex.candidates.size(), ex.example_id, correct});
    r.per_example.emplace_back(ex.example_id, correct);
  }
  std::sort(r.per_example.begin(), r.per_example.end());
  r.accuracy = r.n_examples == 0 ? 0.0
                                 : static_cast<double>(r.n_correct) /
                                       static_cast<double>(r.n_examples);

  std::sort(rows.begin(), rows.end(), [](const Row &a, const Row &b) {
    return std::tie(a.candidates, a.id) < std::tie(b.candidates, b.id);
  });
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t decile = i * 10 / n;
    if (r.deciles.empty() || r.deciles.back().decile != decile) {
      r.deciles.push_back({decile, rows[i].candidates, rows[i].candidates, 0, 0});
    }
    DecileRow &d = r.deciles.back();
    d.max_candidates = rows[i].candidates;
    ++d.n_examples;
    if (rows[i].correct) ++d.n_correct;
  }
  return r;
}

inline nlohmann::ordered_json eval_report_to_json(const EvalReport &r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["dataset"] = r.dataset;
  j["ranker"] = r.ranker;
  j["n_examples"] = r.n_examples;
  j["n_correct"] = r.n_correct;
  j["accuracy"] = r.accuracy;
  j["per_example"] = ordered_json::object();
  for (const auto &[id, ok] : r.per_example) j["per_example"][id] = ok;
  j["deciles"] = ordered_json::array();
  for (const DecileRow &d : r.deciles) {
    j["deciles"].push_back({{"decile", d.decile},
                            {"min_candidates", d.min_candidates},
                            {"max_candidates", d.max_candidates},
                            {"n_examples", d.n_examples},
                            {"n_correct", d.n_correct}});
  }
  return j;
}

inline EvalReport eval_report_from_json(const nlohmann::json &j) {
  EvalReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.ranker = j.at("ranker").get<std::string>();
  r.n_examples = j.at("n_examples").get<std::size_t>();
  r.n_correct = j.at("n_correct").get<std::size_t>();
  r.accuracy = j.at("accuracy").get<double>();
  if (j.contains("per_example")) {
    for (const auto &[id, ok] : j["per_example"].items()) {
      r.per_example.emplace_back(id, ok.get<bool>());
    }
  }
  if (j.contains("deciles")) {
    for (const auto &d : j["deciles"]) {
      r.deciles.push_back({d.at("decile").get<std::size_t>(),
                           d.at("min_candidates").get<std::size_t>(),
                           d.at("max_candidates").get<std::size_t>(),
                           d.at("n_examples").get<std::size_t>(),
                           d.at("n_correct").get<std::size_t>()});
    }
  }
  return r;
}

struct ComparisonColumn {
  std::string header;
  std::vector<EvalReport> reports;
};

// Accuracy (percent) of rankers (rows) across dataset columns.
class ComparisonTable {
 public:
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::map<std::pair<std::string, std::string>, double> cells;  // (row, column)

  std::string cell(const std::string &row, const std::string &column) const {
    auto it = cells.find({row, column});
    if (it == cells.end()) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", it->second * 100.0);
    return buf;
  }

  std::string render_text() const {
    std::size_t first = 6;  // "ranker"
    for (const auto &r : rows) first = std::max(first, r.size());
    std::vector<std::size_t> widths;
    for (const auto &c : columns) widths.push_back(std::max<std::size_t>(c.size(), 5));
    std::ostringstream out;
    auto pad_right = [&](const std::string &s, std::size_t w) {
      out << s << std::string(w > s.size() ? w - s.size() : 0, ' ');
    };
    auto pad_left = [&](const std::string &s, std::size_t w) {
      out << std::string(w > s.size() ? w - s.size() : 0, ' ') << s;
    };
    pad_right("ranker", first);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << "  ";
      pad_left(columns[c], widths[c]);
    }
    out << '\n';
    for (const auto &r : rows) {
      pad_right(r, first);
      for (std::size_t c = 0; c < columns.size(); ++c) {
        out << "  ";
        pad_left(cell(r, columns[c]), widths[c]);
      }
      out << '\n';
    }
    return out.str();
  }

  std::string render_tsv() const {
    std::ostringstream out;
    out << "ranker";
    for (const auto &c : columns) out << '\t' << c;
    out << '\n';
    for (const auto &r : rows) {
      out << r;
      for (const auto &c : columns) out << '\t' << cell(r, c);
      out << '\n';
    }
    return out.str();
  }
};

inline ComparisonTable compare(const std::vector<ComparisonColumn> &columns) {
  if (columns.empty()) throw DataError("compare: no reports");
  ComparisonTable t;
  for (const ComparisonColumn &col : columns) {
    if (col.reports.empty()) throw DataError("compare: column '" + col.header + "' is empty");
    const std::string &dataset = col.reports.front().dataset;
    for (const EvalReport &r : col.reports) {
      if (r.dataset != dataset) {
        throw DataError("compare: column '" + col.header + "' mixes datasets '" + dataset +
                        "' and '" + r.dataset + "'");
      }
      if (std::find(t.rows.begin(), t.rows.end(), r.ranker) == t.rows.end()) {
        t.rows.push_back(r.ranker);
      }
      if (!t.cells.emplace(std::make_pair(r.ranker, col.header), r.accuracy).second) {
        throw DataError("compare: ranker '" + r.ranker + "' appears twice in column '" +
                        col.header + "'");
      }
    }
    t.columns.push_back(col.header);
  }
  return t;
}

// One column per dataset name, in order of first appearance.
inline ComparisonTable compare(const std::vector<EvalReport> &reports) {
  std::vector<ComparisonColumn> columns;
  for (const EvalReport &r : reports) {
    auto it = std::find_if(columns.begin(), columns.end(),
                           [&](const ComparisonColumn &c) { return c.header == r.dataset; });
    if (it == columns.end()) {
      columns.push_back({r.dataset, {}});
      it = columns.end() - 1;
    }
    it->reports.push_back(r);
  }
  return compare(columns);
}

}  // namespace anchorpred

#endif  // ANCHORPRED_EVALUATOR_HPP_
