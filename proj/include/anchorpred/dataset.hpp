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

#ifndef ANCHORPRED_DATASET_HPP_
#define ANCHORPRED_DATASET_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "anchorpred/corpus.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/hash.hpp"
#include "anchorpred/text.hpp"
#include "json.hpp"

namespace anchorpred {

enum class RejectReason {
  kMinimalProse,
  kTooShort,
  kTooFewSections,
  kTooFewInlinks,
  kTooManyInlinks,
  kLinkDense,
};

inline std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kMinimalProse: return "minimal_prose";
    case RejectReason::kTooShort: return "too_short";
    case RejectReason::kTooFewSections: return "too_few_sections";
    case RejectReason::kTooFewInlinks: return "too_few_inlinks";
    case RejectReason::kTooManyInlinks: return "too_many_inlinks";
    case RejectReason::kLinkDense: return "link_dense";
  }
  return "unknown";
}

struct FilterDecision {
  std::string article_id;
  bool accepted = false;
  std::optional<RejectReason> reason;  // set iff rejected
};

// Target-article thresholds.
struct TargetFilter {
  std::size_t min_tokens = 500;
  std::size_t min_sections = 5;
  std::size_t min_inlinks = 25;
  std::size_t max_inlinks = 5000;
  double max_link_fraction = 0.5;
};

enum class Split { kTrain, kDev, kTest, kEvalOnly };

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kEvalOnly: return "eval_only";
  }
  return "unknown";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  if (s == "eval_only") return Split::kEvalOnly;
  throw DataError("unknown split '" + std::string(s) + "'");
}

struct Example {
  std::string example_id;
  Link link;
  std::vector<CandidateAnchor> candidates;
  // Sorted, unique. For reader annotations this is the union over annotators.
  std::vector<std::size_t> relevant;
  Split split = Split::kTrain;
  // Only present for reader-annotation files; empty inner set means "none".
  std::vector<std::vector<std::size_t>> relevant_by_annotator;
};

struct Dataset {
  std::string name;
  std::vector<Example> examples;
};

inline FilterDecision is_valid_target(const Article &article,
                                      const TargetFilter &filter = {}) {
  FilterDecision d{article.id, false, std::nullopt};
  auto reject = [&](RejectReason r) {
    d.reason = r;
    return d;
  };
  constexpr std::string_view kDisambiguation = "(disambiguation)";
  const std::string_view title = article.title;
  if (title.rfind("List of", 0) == 0 ||
      (title.size() >= kDisambiguation.size() &&
       title.substr(title.size() - kDisambiguation.size()) == kDisambiguation)) {
    return reject(RejectReason::kMinimalProse);
  }
  std::size_t link_chars = 0;
  for (const Link &l : article.links) link_chars += l.span.size();
  if (static_cast<double>(link_chars) >
      filter.max_link_fraction * static_cast<double>(article.text.size())) {
    return reject(RejectReason::kLinkDense);
  }
  if (count_tokens(article.text) < filter.min_tokens) {
    return reject(RejectReason::kTooShort);
  }
  std::vector<bool> trivial(article.sections.size(), false);
  std::size_t sections = 0;
  for (std::size_t i = 0; i < article.sections.size(); ++i) {
    const Section &s = article.sections[i];
    trivial[i] = is_trivial_heading(s.heading) || (s.parent && trivial[*s.parent]);
    if (!trivial[i]) ++sections;
  }
  if (sections < filter.min_sections) return reject(RejectReason::kTooFewSections);
  if (article.inlink_count < filter.min_inlinks) {
    return reject(RejectReason::kTooFewInlinks);
  }
  if (article.inlink_count > filter.max_inlinks) {
    return reject(RejectReason::kTooManyInlinks);
  }
  d.accepted = true;
  return d;
}

// First section of `target` whose heading matches `fragment`. Underscores in
// the fragment stand for spaces.
inline std::optional<std::size_t> find_section(const Article &target,
                                               std::string_view fragment) {
  std::string f(fragment);
  std::replace(f.begin(), f.end(), '_', ' ');
  const std::string key = normalize_for_match(f);
  for (std::size_t i = 0; i < target.sections.size(); ++i) {
    if (normalize_for_match(target.sections[i].heading) == key) return i;
  }
  return std::nullopt;
}

struct DroppedLink {
  std::string source_id;
  Span span;
  std::string target_id;
  std::string reason;
};

// Per-stage counts of the construction pipeline.
struct BuildReport {
  std::size_t articles = 0;
  std::size_t accepted_targets = 0;
  std::map<std::string, std::size_t> rejected_targets;
  std::size_t links_total = 0;
  std::size_t links_with_fragment = 0;
  std::size_t dropped_missing_target = 0;
  std::size_t dropped_self_link = 0;
  std::size_t dropped_rejected_target = 0;
  std::size_t dropped_unknown_fragment = 0;
  std::size_t extracted = 0;
  std::size_t deduplicated = 0;
  std::size_t duplicates_removed = 0;
  std::size_t nontrivial = 0;
  std::size_t trivial_removed = 0;
  std::size_t dropped_empty_section = 0;
  std::size_t examples = 0;
  std::map<std::string, std::size_t> splits;
  std::vector<DroppedLink> dropped;
};

namespace dataset_internal {

inline std::map<std::string, FilterDecision> decide_targets(
    const Corpus &corpus, const TargetFilter &filter) {
  std::map<std::string, FilterDecision> out;
  for (const Article &a : corpus.articles()) {
    out.emplace(a.id, is_valid_target(a, filter));
  }
  return out;
}

inline bool link_order(const Link &a, const Link &b) {
  return std::tie(a.source_id, a.span.begin, a.span.end) <
         std::tie(b.source_id, b.span.begin, b.span.end);
}

}  // namespace dataset_internal

// Step 1: anchored links to accepted targets whose fragment names a section.
// Output is sorted by (source_id, begin).
inline std::vector<Link> extract_anchored_links(
    const Corpus &corpus, const std::map<std::string, FilterDecision> &decisions,
    BuildReport *report = nullptr) {
  std::vector<Link> out;
  auto drop = [&](const Link &l, std::size_t BuildReport::*counter,
                  const char *reason) {
    if (report == nullptr) return;
    ++(report->*counter);
    report->dropped.push_back({l.source_id, l.span, l.target_id, reason});
  };
  for (const Article &source : corpus.articles()) {
    for (const Link &l : source.links) {
      if (report) ++report->links_total;
      if (!l.target_fragment) continue;
      if (report) ++report->links_with_fragment;
      const Article *target = corpus.find(l.target_id);
      if (target == nullptr) {
        drop(l, &BuildReport::dropped_missing_target, "missing_target");
        continue;
      }
      if (target->id == source.id) {
        drop(l, &BuildReport::dropped_self_link, "self_link");
        continue;
      }
      auto it = decisions.find(target->id);
      if (it == decisions.end() || !it->second.accepted) {
        drop(l, &BuildReport::dropped_rejected_target, "rejected_target");
        continue;
      }
      if (!find_section(*target, *l.target_fragment)) {
        drop(l, &BuildReport::dropped_unknown_fragment, "unknown_fragment");
        continue;
      }
      out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end(), dataset_internal::link_order);
  if (report) report->extracted = out.size();
  return out;
}

inline std::vector<Link> extract_anchored_links(const Corpus &corpus,
                                                const TargetFilter &filter = {}) {
  return extract_anchored_links(corpus, dataset_internal::decide_targets(corpus, filter));
}

// Step 2: keeps the first link per (normalized text, target) in
// (source_id, begin) order.
inline std::vector<Link> deduplicate(std::vector<Link> links) {
  std::stable_sort(links.begin(), links.end(), dataset_internal::link_order);
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<Link> out;
  for (Link &l : links) {
    if (seen.emplace(normalize_for_match(l.text), l.target_id).second) {
      out.push_back(std::move(l));
    }
  }
  return out;
}

// Step 3: drops links whose text equals the linked section's heading.
inline std::vector<Link> filter_trivial(std::vector<Link> links, const Corpus &corpus) {
  std::vector<Link> out;
  for (Link &l : links) {
    const Article *target = corpus.find(l.target_id);
    if (target != nullptr && l.target_fragment) {
      if (auto s = find_section(*target, *l.target_fragment)) {
        if (normalize_for_match(l.text) ==
            normalize_for_match(target->sections[*s].heading)) {
          continue;
        }
      }
    }
    out.push_back(std::move(l));
  }
  return out;
}

// Candidate indices of every retained paragraph inside the linked section,
// nested subsections included. Empty when the section holds none.
inline std::vector<std::size_t> expand_section_labels(const Link &link,
                                                      const Article &target) {
  if (!link.target_fragment) {
    throw ContractError("link to '" + target.id + "' has no section fragment");
  }
  const auto section = find_section(target, *link.target_fragment);
  if (!section) {
    throw ContractError("fragment '" + *link.target_fragment +
                        "' names no section of '" + target.id + "'");
  }
  const std::vector<std::size_t> kept = retained_paragraphs(target);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::optional<std::size_t> s = target.paragraphs[kept[i]].section;
    while (s && *s != *section) s = target.sections[*s].parent;
    if (s) out.push_back(i);
  }
  return out;
}

inline std::string make_example_id(const Link &link) {
  const std::string key = link.source_id + '\x1f' + std::to_string(link.span.begin) +
                          '\x1f' + std::to_string(link.span.end) + '\x1f' +
                          link.target_id;
  return hex_digest(key, 16);
}

// 80/10/10 bucketing on SHA-256 of the id.
inline Split assign_split(std::string_view example_id) {
  const std::uint64_t bucket = hash_u64(example_id) % 10;
  if (bucket < 8) return Split::kTrain;
  if (bucket == 8) return Split::kDev;
  return Split::kTest;
}

struct BuildResult {
  Dataset dataset;
  BuildReport report;
};

inline BuildResult build_dataset(const Corpus &corpus, const TargetFilter &filter = {},
                                 std::string name = "dataset") {
  BuildResult result;
  BuildReport &report = result.report;
  report.articles = corpus.size();
  const auto decisions = dataset_internal::decide_targets(corpus, filter);
  for (const auto &[id, d] : decisions) {
    if (d.accepted) {
      ++report.accepted_targets;
    } else {
      ++report.rejected_targets[std::string(to_string(*d.reason))];
    }
  }

  std::vector<Link> links = extract_anchored_links(corpus, decisions, &report);
  links = deduplicate(std::move(links));
  report.deduplicated = links.size();
  report.duplicates_removed = report.extracted - report.deduplicated;
  links = filter_trivial(std::move(links), corpus);
  report.nontrivial = links.size();
  report.trivial_removed = report.deduplicated - report.nontrivial;

  result.dataset.name = std::move(name);
  for (Link &l : links) {
    const Article &target = corpus.at(l.target_id);
    std::vector<std::size_t> relevant = expand_section_labels(l, target);
    if (relevant.empty()) {
      ++report.dropped_empty_section;
      report.dropped.push_back({l.source_id, l.span, l.target_id, "empty_section"});
      continue;
    }
    Example ex;
    ex.example_id = make_example_id(l);
    ex.candidates = candidate_anchors(target);
    ex.relevant = std::move(relevant);
    ex.split = assign_split(ex.example_id);
    ex.link = std::move(l);
    ++report.splits[std::string(to_string(ex.split))];
    result.dataset.examples.push_back(std::move(ex));
  }
  report.examples = result.dataset.examples.size();
  if (result.dataset.examples.empty()) {
    throw DataError("dataset is empty: no anchored links survived the pipeline");
  }
  return result;
}

inline nlohmann::ordered_json report_to_json(const BuildReport &r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["articles"] = r.articles;
  j["accepted_targets"] = r.accepted_targets;
  j["rejected_targets"] = ordered_json::object();
  for (const auto &[k, v] : r.rejected_targets) j["rejected_targets"][k] = v;
  j["links_total"] = r.links_total;
  j["links_with_fragment"] = r.links_with_fragment;
  j["dropped_missing_target"] = r.dropped_missing_target;
  j["dropped_self_link"] = r.dropped_self_link;
  j["dropped_rejected_target"] = r.dropped_rejected_target;
  j["dropped_unknown_fragment"] = r.dropped_unknown_fragment;
  j["step1_extracted"] = r.extracted;
  j["step2_deduplicated"] = r.deduplicated;
  j["step2_removed"] = r.duplicates_removed;
  j["step3_nontrivial"] = r.nontrivial;
  j["step3_removed"] = r.trivial_removed;
  j["dropped_empty_section"] = r.dropped_empty_section;
  j["examples"] = r.examples;
  j["splits"] = ordered_json::object();
  for (const auto &[k, v] : r.splits) j["splits"][k] = v;
  j["dropped"] = ordered_json::array();
  for (const DroppedLink &d : r.dropped) {
    j["dropped"].push_back({{"source_id", d.source_id},
                            {"link_span", span_to_json(d.span)},
                            {"target_id", d.target_id},
                            {"reason", d.reason}});
  }
  return j;
}

// --- Dataset file (JSON Lines) ---

inline nlohmann::ordered_json example_to_json(const Example &ex) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["example_id"] = ex.example_id;
  j["source_id"] = ex.link.source_id;
  j["link_span"] = span_to_json(ex.link.span);
  j["link_text"] = ex.link.text;
  j["target_id"] = ex.link.target_id;
  j["candidates"] = ordered_json::array();
  for (const CandidateAnchor &c : ex.candidates) {
    ordered_json jc;
    jc["index"] = c.index;
    jc["span"] = span_to_json(c.span);
    jc["heading_path"] = c.section_heading_path;
    jc["is_lead"] = c.is_lead;
    j["candidates"].push_back(std::move(jc));
  }
  j["relevant"] = ex.relevant;
  j["split"] = to_string(ex.split);
  if (!ex.relevant_by_annotator.empty()) {
    j["relevant_by_annotator"] = ex.relevant_by_annotator;
  }
  return j;
}

inline void validate_example(const Example &ex) {
  if (ex.candidates.empty()) {
    throw DataError("example '" + ex.example_id + "' has no candidates");
  }
  for (std::size_t i = 0; i < ex.candidates.size(); ++i) {
    if (ex.candidates[i].index != i) {
      throw DataError("example '" + ex.example_id + "' candidate indices are not 0..n-1");
    }
  }
  if (ex.relevant.empty()) {
    throw DataError("example '" + ex.example_id + "' has no relevant candidates");
  }
  for (std::size_t r : ex.relevant) {
    if (r >= ex.candidates.size()) {
      throw DataError("example '" + ex.example_id + "' relevant index " +
                      std::to_string(r) + " out of range");
    }
  }
  for (const auto &set : ex.relevant_by_annotator) {
    for (std::size_t r : set) {
      if (r >= ex.candidates.size()) {
        throw DataError("example '" + ex.example_id + "' annotator index " +
                        std::to_string(r) + " out of range");
      }
    }
  }
}

inline Example example_from_json(const nlohmann::json &j) {
  Example ex;
  ex.example_id = j.at("example_id").get<std::string>();
  ex.link.source_id = j.at("source_id").get<std::string>();
  ex.link.span = span_from_json(j.at("link_span"));
  ex.link.text = j.at("link_text").get<std::string>();
  ex.link.target_id = j.at("target_id").get<std::string>();
  for (const auto &jc : j.at("candidates")) {
    CandidateAnchor c;
    c.index = jc.at("index").get<std::size_t>();
    c.span = span_from_json(jc.at("span"));
    c.section_heading_path = jc.at("heading_path").get<std::vector<std::string>>();
    c.is_lead = jc.at("is_lead").get<bool>();
    ex.candidates.push_back(std::move(c));
  }
  ex.split = parse_split(j.at("split").get<std::string>());
  if (j.contains("relevant_by_annotator")) {
    ex.relevant_by_annotator =
        j["relevant_by_annotator"].get<std::vector<std::vector<std::size_t>>>();
  }
  std::set<std::size_t> relevant;
  if (j.contains("relevant")) {
    for (std::size_t r : j["relevant"].get<std::vector<std::size_t>>()) relevant.insert(r);
  }
  for (const auto &set : ex.relevant_by_annotator) relevant.insert(set.begin(), set.end());
  ex.relevant.assign(relevant.begin(), relevant.end());
  validate_example(ex);
  return ex;
}

inline void write_dataset(std::ostream &out, const Dataset &dataset) {
  for (const Example &ex : dataset.examples) out << example_to_json(ex).dump() << '\n';
}

inline Dataset read_dataset(std::istream &in, std::string name = "dataset") {
  Dataset d;
  d.name = std::move(name);
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      Example ex = example_from_json(nlohmann::json::parse(line));
      if (!ids.insert(ex.example_id).second) {
        throw DataError("duplicate example id '" + ex.example_id + "'");
      }
      d.examples.push_back(std::move(ex));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(std::string("bad dataset record: ") + e.what(), line_no);
    } catch (const DataError &e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return d;
}

inline Dataset read_dataset_file(const std::string &path, std::string name = "") {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file '" + path + "'");
  if (name.empty()) {
    const auto slash = path.find_last_of('/');
    name = slash == std::string::npos ? path : path.substr(slash + 1);
  }
  return read_dataset(in, std::move(name));
}

inline Dataset select_split(const Dataset &d, std::optional<Split> split) {
  if (!split) return d;
  Dataset out;
  out.name = d.name;
  for (const Example &ex : d.examples) {
    if (ex.split == *split) out.examples.push_back(ex);
  }
  return out;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_DATASET_HPP_
