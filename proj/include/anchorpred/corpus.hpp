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

#ifndef ANCHORPRED_CORPUS_HPP_
#define ANCHORPRED_CORPUS_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anchorpred/error.hpp"
#include "anchorpred/text.hpp"
#include "json.hpp"

namespace anchorpred {

// All offsets below are byte offsets into Article::text (UTF-8).

struct Section {
  std::string heading;
  int level = 1;
  // Ancestor headings, outermost first, ending with `heading`.
  std::vector<std::string> heading_path;
  // From the heading line to the end of the section's last block.
  Span span;
  Span heading_span;
  std::optional<std::size_t> parent;

  bool operator==(const Section &) const = default;
};

struct Paragraph {
  Span span;
  // Innermost enclosing section; nullopt for the lead region.
  std::optional<std::size_t> section;

  bool operator==(const Paragraph &) const = default;
};

struct Link {
  std::string source_id;
  Span span;
  std::string text;
  std::string target_id;
  std::optional<std::string> target_fragment;

  bool operator==(const Link &) const = default;
};

struct Article {
  std::string id;
  std::string title;
  std::string text;
  std::vector<Section> sections;
  std::vector<Paragraph> paragraphs;
  std::vector<Link> links;
  std::size_t inlink_count = 0;

  bool operator==(const Article &) const = default;
};

struct CandidateAnchor {
  std::size_t index = 0;
  Span span;
  std::vector<std::string> section_heading_path;
  bool is_lead = false;

  bool operator==(const CandidateAnchor &) const = default;
};

// Headings whose sections never hold useful anchors. Compared after
// normalize_for_match.
inline bool is_trivial_heading(std::string_view heading) {
  static const std::array<std::string_view, 7> kStoplist = {
      "references", "see also",        "external links", "notes",
      "further reading", "bibliography", "sources"};
  const std::string key = normalize_for_match(heading);
  return std::find(kStoplist.begin(), kStoplist.end(), key) != kStoplist.end();
}

namespace corpus_internal {

struct InlineLink {
  Span span;  // relative to the parsed line
  std::string target_id;
  std::optional<std::string> fragment;
};

struct InlineText {
  std::string text;
  std::vector<InlineLink> links;
};

// Strips [[...]] markup from one line.
inline InlineText parse_inline(std::string_view line, std::string_view self_id,
                               std::size_t line_no) {
  InlineText out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = line.find("[[", pos);
    if (open == std::string_view::npos) {
      out.text.append(line.substr(pos));
      break;
    }
    out.text.append(line.substr(pos, open - pos));
    const std::size_t close = line.find("]]", open + 2);
    if (close == std::string_view::npos) {
      throw ParseError("unclosed link markup", line_no);
    }
    const std::size_t nested = line.find("[[", open + 2);
    if (nested < close) throw ParseError("nested link markup", line_no);

    const std::string_view inner = line.substr(open + 2, close - open - 2);
    const std::size_t bar = inner.find('|');
    const std::string_view target_part =
        trim(bar == std::string_view::npos ? inner : inner.substr(0, bar));
    const std::string_view display =
        trim(bar == std::string_view::npos ? inner : inner.substr(bar + 1));

    InlineLink link;
    const std::size_t hash = target_part.find('#');
    if (hash == std::string_view::npos) {
      link.target_id = std::string(target_part);
    } else {
      link.target_id = std::string(trim(target_part.substr(0, hash)));
      const std::string_view fragment = trim(target_part.substr(hash + 1));
      if (!fragment.empty()) link.fragment = std::string(fragment);
    }
    if (link.target_id.empty()) {
      if (!link.fragment) throw ParseError("empty link target", line_no);
      link.target_id = std::string(self_id);
    }
    if (display.empty()) throw ParseError("empty link text", line_no);

    link.span.begin = out.text.size();
    out.text.append(display);
    link.span.end = out.text.size();
    out.links.push_back(std::move(link));
    pos = close + 2;
  }
  return out;
}

// Returns the heading level (count of '=' per side minus one) and content,
// or nullopt when the line is not a heading. Throws on malformed headings.
inline std::optional<std::pair<int, std::string_view>> parse_heading(
    std::string_view line, std::size_t line_no) {
  if (line.empty() || line.front() != '=') return std::nullopt;
  const std::size_t left = line.find_first_not_of('=');
  if (left == std::string_view::npos) {
    throw ParseError("malformed heading line", line_no);
  }
  const std::size_t last = line.find_last_not_of('=');
  const std::size_t right = line.size() - 1 - last;
  if (left < 2 || left != right) {
    throw ParseError("malformed heading line", line_no);
  }
  const std::string_view content = trim(line.substr(left, last + 1 - left));
  if (content.empty()) throw ParseError("empty heading", line_no);
  return std::make_pair(static_cast<int>(left) - 1, content);
}

}  // namespace corpus_internal

// Parses one wiki-lite body. Paragraphs are separated by blank lines, lines
// inside a paragraph are joined with a single space, and blocks (paragraphs
// and heading lines) are joined with "\n\n" in the plain text.
inline Article parse_article(std::string_view id, std::string_view title,
                             std::string_view body) {
  using corpus_internal::InlineText;
  Article article;
  article.id = std::string(id);
  article.title = std::string(title);

  std::vector<std::size_t> open_sections;
  InlineText para;
  bool para_open = false;

  auto begin_block = [&]() -> std::size_t {
    if (!article.text.empty()) article.text.append("\n\n");
    return article.text.size();
  };
  auto add_links = [&](const InlineText &inl, std::size_t base) {
    for (const auto &l : inl.links) {
      Link link;
      link.source_id = article.id;
      link.span = {base + l.span.begin, base + l.span.end};
      link.text = std::string(slice(inl.text, l.span));
      link.target_id = l.target_id;
      link.target_fragment = l.fragment;
      article.links.push_back(std::move(link));
    }
  };
  auto flush_paragraph = [&]() {
    if (!para_open) return;
    const std::size_t base = begin_block();
    article.text.append(para.text);
    Paragraph p;
    p.span = {base, article.text.size()};
    if (!open_sections.empty()) p.section = open_sections.back();
    article.paragraphs.push_back(p);
    add_links(para, base);
    para = InlineText{};
    para_open = false;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    const std::string_view line = trim(body.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;

    if (line.empty()) {
      flush_paragraph();
      continue;
    }
    if (auto heading = corpus_internal::parse_heading(line, line_no)) {
      flush_paragraph();
      const auto [level, content] = *heading;
      const InlineText inl =
          corpus_internal::parse_inline(content, article.id, line_no);
      const std::size_t section_end = article.text.size();
      while (!open_sections.empty() &&
             article.sections[open_sections.back()].level >= level) {
        article.sections[open_sections.back()].span.end = section_end;
        open_sections.pop_back();
      }
      Section section;
      section.heading = inl.text;
      section.level = level;
      if (!open_sections.empty()) {
        section.parent = open_sections.back();
        section.heading_path =
            article.sections[open_sections.back()].heading_path;
      }
      section.heading_path.push_back(inl.text);
      const std::size_t base = begin_block();
      article.text.append(inl.text);
      section.heading_span = {base, article.text.size()};
      section.span = section.heading_span;
      add_links(inl, base);
      open_sections.push_back(article.sections.size());
      article.sections.push_back(std::move(section));
      continue;
    }
    const InlineText inl =
        corpus_internal::parse_inline(line, article.id, line_no);
    if (para_open) {
      para.text.push_back(' ');
    }
    const std::size_t base = para.text.size();
    para.text.append(inl.text);
    for (auto l : inl.links) {
      l.span = {base + l.span.begin, base + l.span.end};
      para.links.push_back(std::move(l));
    }
    para_open = true;
  }
  flush_paragraph();
  for (std::size_t idx : open_sections) {
    article.sections[idx].span.end = article.text.size();
  }
  return article;
}

class Corpus {
 public:
  Corpus() = default;

  // Throws ParseError (line 0) on duplicate ids; load_corpus reports lines.
  void add(Article article) {
    if (index_.count(article.id) != 0) {
      throw ParseError("duplicate article id '" + article.id + "'", 0);
    }
    index_.emplace(article.id, articles_.size());
    articles_.push_back(std::move(article));
  }

  // Counts, for every article, the distinct other articles linking to it.
  void compute_inlinks() {
    std::vector<std::size_t> counts(articles_.size(), 0);
    for (const Article &a : articles_) {
      std::set<std::size_t> targets;
      for (const Link &l : a.links) {
        auto it = index_.find(l.target_id);
        if (it != index_.end() && l.target_id != a.id) targets.insert(it->second);
      }
      for (std::size_t t : targets) ++counts[t];
    }
    for (std::size_t i = 0; i < articles_.size(); ++i) {
      articles_[i].inlink_count = counts[i];
    }
  }

  const Article *find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &articles_[it->second];
  }

  const Article &at(std::string_view id) const {
    const Article *a = find(id);
    if (a == nullptr) throw DataError("unknown article id '" + std::string(id) + "'");
    return *a;
  }

  const std::vector<Article> &articles() const { return articles_; }
  std::size_t size() const { return articles_.size(); }

 private:
  std::vector<Article> articles_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads a JSON Lines corpus: {"id": str, "title": str, "body": str} per line.
inline Corpus load_corpus(std::istream &in) {
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("body") ||
        !record["body"].is_string()) {
      throw ParseError("record needs string fields 'id' and 'body'", line_no);
    }
    const std::string id = record["id"].get<std::string>();
    const std::string title = record.value("title", id);
    if (auto it = first_line.find(id); it != first_line.end()) {
      throw ParseError("duplicate article id '" + id + "' (first seen on line " +
                           std::to_string(it->second) + ")",
                       line_no);
    }
    first_line.emplace(id, line_no);
    try {
      corpus.add(parse_article(id, title, record["body"].get<std::string>()));
    } catch (const ParseError &e) {
      throw ParseError("article '" + id + "' body " + e.what(), line_no);
    }
  }
  corpus.compute_inlinks();
  return corpus;
}

inline Corpus load_corpus_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  return load_corpus(in);
}

// Indices into article.paragraphs of paragraphs outside stoplisted sections.
inline std::vector<std::size_t> retained_paragraphs(const Article &article) {
  std::vector<bool> trivial(article.sections.size(), false);
  for (std::size_t i = 0; i < article.sections.size(); ++i) {
    const Section &s = article.sections[i];
    trivial[i] = is_trivial_heading(s.heading) || (s.parent && trivial[*s.parent]);
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < article.paragraphs.size(); ++i) {
    const auto &section = article.paragraphs[i].section;
    if (!section || !trivial[*section]) out.push_back(i);
  }
  return out;
}

// Candidate anchors are the retained paragraphs in document order, indexed
// after stoplist exclusion. Candidate 0 is the lead.
inline std::vector<CandidateAnchor> candidate_anchors(const Article &target) {
  if (target.paragraphs.empty()) {
    throw DataError("article '" + target.id + "' has no paragraphs");
  }
  const std::vector<std::size_t> kept = retained_paragraphs(target);
  if (kept.empty()) {
    throw DataError("article '" + target.id + "' has no candidate anchors");
  }
  std::vector<CandidateAnchor> out;
  out.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Paragraph &p = target.paragraphs[kept[i]];
    CandidateAnchor c;
    c.index = i;
    c.span = p.span;
    if (p.section) c.section_heading_path = target.sections[*p.section].heading_path;
    c.is_lead = i == 0;
    out.push_back(std::move(c));
  }
  return out;
}

inline std::optional<Span> lead_paragraph(const Article &article) {
  const auto kept = retained_paragraphs(article);
  if (kept.empty()) return std::nullopt;
  return article.paragraphs[kept.front()].span;
}

// Innermost section whose span contains `span`.
inline std::optional<std::size_t> section_containing(const Article &article,
                                                     Span span) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < article.sections.size(); ++i) {
    if (article.sections[i].span.contains(span)) best = i;
  }
  return best;
}

// The link plus up to `window_tokens` whole tokens on each side.
inline Span link_context_span(const Article &source, const Link &link,
                              std::size_t window_tokens) {
  if (window_tokens == 0) throw ContractError("context window must be positive");
  if (link.span.begin >= link.span.end || link.span.end > source.text.size()) {
    throw ContractError("link span outside article '" + source.id + "'");
  }
  const std::vector<Span> tokens = token_spans(source.text);
  Span out = link.span;
  std::size_t left = 0;
  for (auto it = tokens.rbegin(); it != tokens.rend() && left < window_tokens; ++it) {
    if (it->end <= link.span.begin) {
      out.begin = it->begin;
      ++left;
    }
  }
  std::size_t right = 0;
  for (const Span &t : tokens) {
    if (right >= window_tokens) break;
    if (t.begin >= link.span.end) {
      out.end = t.end;
      ++right;
    }
  }
  return out;
}

inline std::string link_context(const Article &source, const Link &link,
                                std::size_t window_tokens) {
  return std::string(slice(source.text, link_context_span(source, link, window_tokens)));
}

// Debug serializer for golden tests.
inline nlohmann::ordered_json span_to_json(Span s) {
  return nlohmann::ordered_json::array({s.begin, s.end});
}

inline Span span_from_json(const nlohmann::json &j) {
  if (!j.is_array() || j.size() != 2) throw DataError("span must be [begin, end]");
  Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (s.begin > s.end) throw DataError("span begin exceeds end");
  return s;
}

inline nlohmann::ordered_json article_to_json(const Article &a) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["id"] = a.id;
  j["title"] = a.title;
  j["text"] = a.text;
  j["sections"] = ordered_json::array();
  for (const Section &s : a.sections) {
    ordered_json js;
    js["heading"] = s.heading;
    js["level"] = s.level;
    js["heading_path"] = s.heading_path;
    js["span"] = span_to_json(s.span);
    js["heading_span"] = span_to_json(s.heading_span);
    js["parent"] = s.parent ? ordered_json(*s.parent) : ordered_json(nullptr);
    j["sections"].push_back(std::move(js));
  }
  j["paragraphs"] = ordered_json::array();
  for (const Paragraph &p : a.paragraphs) {
    ordered_json jp;
    jp["span"] = span_to_json(p.span);
    jp["section"] = p.section ? ordered_json(*p.section) : ordered_json(nullptr);
    j["paragraphs"].push_back(std::move(jp));
  }
  j["links"] = ordered_json::array();
  for (const Link &l : a.links) {
    ordered_json jl;
    jl["source_id"] = l.source_id;
    jl["span"] = span_to_json(l.span);
    jl["text"] = l.text;
    jl["target_id"] = l.target_id;
    jl["target_fragment"] =
        l.target_fragment ? ordered_json(*l.target_fragment) : ordered_json(nullptr);
    j["links"].push_back(std::move(jl));
  }
  j["inlink_count"] = a.inlink_count;
  return j;
}

inline Article article_from_json(const nlohmann::json &j) {
  Article a;
  a.id = j.at("id").get<std::string>();
  a.title = j.at("title").get<std::string>();
  a.text = j.at("text").get<std::string>();
  for (const auto &js : j.at("sections")) {
    Section s;
    s.heading = js.at("heading").get<std::string>();
    s.level = js.at("level").get<int>();
    s.heading_path = js.at("heading_path").get<std::vector<std::string>>();
    s.span = span_from_json(js.at("span"));
    s.heading_span = span_from_json(js.at("heading_span"));
    if (!js.at("parent").is_null()) s.parent = js["parent"].get<std::size_t>();
    a.sections.push_back(std::move(s));
  }
  for (const auto &jp : j.at("paragraphs")) {
    Paragraph p;
    p.span = span_from_json(jp.at("span"));
    if (!jp.at("section").is_null()) p.section = jp["section"].get<std::size_t>();
    a.paragraphs.push_back(p);
  }
  for (const auto &jl : j.at("links")) {
    Link l;
    l.source_id = jl.at("source_id").get<std::string>();
    l.span = span_from_json(jl.at("span"));
    l.text = jl.at("text").get<std::string>();
    l.target_id = jl.at("target_id").get<std::string>();
    if (!jl.at("target_fragment").is_null()) {
      l.target_fragment = jl["target_fragment"].get<std::string>();
    }
    a.links.push_back(std::move(l));
  }
  a.inlink_count = j.at("inlink_count").get<std::size_t>();
  return a;
}

// Re-emits wiki-lite markup that parses back to the same article.
inline std::string to_markup(const Article &a) {
  struct Block {
    Span span;
    int level;  // 0 for paragraphs
  };
  std::vector<Block> blocks;
  for (const Paragraph &p : a.paragraphs) blocks.push_back({p.span, 0});
  for (const Section &s : a.sections) blocks.push_back({s.heading_span, s.level});
  std::sort(blocks.begin(), blocks.end(),
            [](const Block &x, const Block &y) { return x.span.begin < y.span.begin; });

  auto render = [&](Span span) {
    std::string out;
    std::size_t pos = span.begin;
    for (const Link &l : a.links) {
      if (!span.contains(l.span)) continue;
      out.append(a.text, pos, l.span.begin - pos);
      out.append("[[");
      if (l.target_id != a.id || !l.target_fragment) out.append(l.target_id);
      if (l.target_fragment) out.append("#").append(*l.target_fragment);
      out.append("|").append(l.text).append("]]");
      pos = l.span.end;
    }
    out.append(a.text, pos, span.end - pos);
    return out;
  };

  std::string body;
  for (const Block &b : blocks) {
    if (!body.empty()) body.append("\n\n");
    if (b.level == 0) {
      body.append(render(b.span));
    } else {
      const std::string eq(static_cast<std::size_t>(b.level) + 1, '=');
      body.append(eq).append(" ").append(render(b.span)).append(" ").append(eq);
    }
  }
  return body;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_CORPUS_HPP_
