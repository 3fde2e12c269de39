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

#ifndef ANCHORPRED_ANCHOR_URL_HPP_
#define ANCHORPRED_ANCHOR_URL_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anchorpred/corpus.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/text.hpp"

namespace anchorpred {

// Scroll-to-text fragment: "#:~:text=" start [ "," end ].
struct TextFragment {
  std::string text_start;
  std::optional<std::string> text_end;
  std::string encoded;

  bool operator==(const TextFragment &) const = default;
};

class FragmentError : public Error {
 public:
  enum class Kind { kNoMatch, kAmbiguous, kEmpty, kMalformed };
  FragmentError(Kind kind, const std::string &message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::string_view kTextDirective = "#:~:text=";
inline constexpr std::size_t kFragmentWindow = 8;

// Percent-encodes everything except ASCII alphanumerics and . _ ~ ! ' ( ) *
// ; : / ? @ = + $. In particular ',', '&', '-', '%', spaces and all non-ASCII
// bytes are encoded.
inline std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  static constexpr std::string_view kSafe = "._~!'()*;:/?@=+$";
  std::string out;
  for (unsigned char c : s) {
    const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (alnum || kSafe.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

inline std::string percent_decode(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) {
      throw FragmentError(FragmentError::Kind::kMalformed, "truncated percent escape");
    }
    const int hi = hex(s[i + 1]);
    const int lo = hex(s[i + 2]);
    if (hi < 0 || lo < 0) {
      throw FragmentError(FragmentError::Kind::kMalformed, "bad percent escape");
    }
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

inline std::string encode_fragment(std::string_view start, const std::optional<std::string> &end) {
  std::string out(kTextDirective);
  out += percent_encode(start);
  if (end) out += "," + percent_encode(*end);
  return out;
}

// Accepts a bare suffix or a whole URL containing the text directive.
inline TextFragment parse_fragment(std::string_view encoded) {
  const std::size_t at = encoded.find(kTextDirective);
  if (at == std::string_view::npos) {
    throw FragmentError(FragmentError::Kind::kMalformed, "no text directive in fragment");
  }
  const std::string_view value = encoded.substr(at + kTextDirective.size());
  TextFragment f;
  f.encoded = std::string(encoded.substr(at));
  const std::size_t comma = value.find(',');
  f.text_start = percent_decode(value.substr(0, comma));
  if (comma != std::string_view::npos) {
    const std::string_view rest = value.substr(comma + 1);
    if (rest.find(',') != std::string_view::npos) {
      throw FragmentError(FragmentError::Kind::kMalformed, "too many fragment parts");
    }
    f.text_end = percent_decode(rest);
  }
  if (f.text_start.empty()) {
    throw FragmentError(FragmentError::Kind::kMalformed, "empty fragment start");
  }
  return f;
}

// Start = first `window` tokens, or the rest of the paragraph from its first
// token when it has no more than `window` tokens. End = last `window` tokens
// when the paragraph has more than 2 * window tokens. Substrings are exact.
inline TextFragment fragment_for_window(std::string_view paragraph, std::size_t window) {
  const std::vector<Span> tokens = token_spans(paragraph);
  if (tokens.empty()) {
    throw FragmentError(FragmentError::Kind::kEmpty, "paragraph has no tokens");
  }
  const std::size_t n = tokens.size();
  TextFragment f;
  const std::size_t stop = n <= window ? paragraph.size() : tokens[window - 1].end;
  f.text_start = std::string(paragraph.substr(tokens[0].begin, stop - tokens[0].begin));
  if (n > 2 * window) {
    const Span first = tokens[n - window];
    f.text_end = std::string(paragraph.substr(first.begin, tokens[n - 1].end - first.begin));
  }
  f.encoded = encode_fragment(f.text_start, f.text_end);
  return f;
}

// True when `paragraph` starts (at its first token) with the fragment start
// and ends (at its last token) with the fragment end.
inline bool fragment_matches(const TextFragment &f, std::string_view paragraph) {
  const std::vector<Span> tokens = token_spans(paragraph);
  if (tokens.empty()) return false;
  const std::string_view region = paragraph.substr(tokens.front().begin);
  if (region.substr(0, f.text_start.size()) != f.text_start) return false;
  if (!f.text_end) return true;
  const std::string &end = *f.text_end;
  const std::string_view body = region.substr(0, tokens.back().end - tokens.front().begin);
  return body.size() >= f.text_start.size() + end.size() &&
         body.substr(body.size() - end.size()) == end;
}

// Index of the unique candidate of `target` matched by `f`.
inline std::size_t resolve_fragment(const TextFragment &f, const Article &target) {
  std::vector<std::size_t> hits;
  for (const CandidateAnchor &c : candidate_anchors(target)) {
    if (fragment_matches(f, slice(target.text, c.span))) hits.push_back(c.index);
  }
  if (hits.empty()) {
    throw FragmentError(FragmentError::Kind::kNoMatch,
                        "fragment matches no candidate of '" + target.id + "'");
  }
  if (hits.size() > 1) {
    throw FragmentError(FragmentError::Kind::kAmbiguous,
                        "fragment matches " + std::to_string(hits.size()) +
                            " candidates of '" + target.id + "'");
  }
  return hits.front();
}

// Builds a fragment for `candidate`, doubling the token window until it is
// unique among the target's candidates. Fails only when the whole paragraph
// is still ambiguous.
inline TextFragment make_fragment(const Article &target, const CandidateAnchor &candidate) {
  const std::vector<CandidateAnchor> all = candidate_anchors(target);
  if (candidate.index >= all.size() || all[candidate.index].span != candidate.span) {
    throw ContractError("candidate does not belong to '" + target.id + "'");
  }
  const std::string_view paragraph = slice(target.text, candidate.span);
  const std::size_t n = token_spans(paragraph).size();
  for (std::size_t window = kFragmentWindow;; window *= 2) {
    TextFragment f = fragment_for_window(paragraph, window);
    std::size_t hits = 0;
    for (const CandidateAnchor &c : all) {
      if (fragment_matches(f, slice(target.text, c.span))) ++hits;
    }
    if (hits == 1) return f;
    if (window >= n) {
      throw FragmentError(FragmentError::Kind::kAmbiguous,
                          "candidate " + std::to_string(candidate.index) + " of '" + target.id +
                              "' is indistinguishable from another candidate");
    }
  }
}

}  // namespace anchorpred

#endif  // ANCHORPRED_ANCHOR_URL_HPP_
