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

#ifndef ANCHORPRED_TEXT_HPP_
#define ANCHORPRED_TEXT_HPP_

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anchorpred/error.hpp"

namespace anchorpred {

// Half-open byte range [begin, end) into a UTF-8 string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin >= end; }
  bool contains(const Span &other) const {
    return begin <= other.begin && other.end <= end;
  }
  bool operator==(const Span &) const = default;
};

inline std::string_view slice(std::string_view text, Span span) {
  return text.substr(span.begin, span.size());
}

namespace text_internal {

inline bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

inline bool is_dash(UChar32 c) {
  return c == '-' || (c >= 0x2010 && c <= 0x2015) || c == 0x2212 ||
         c == 0xFE58 || c == 0xFE63 || c == 0xFF0D;
}

inline void append_utf8(std::string &out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace text_internal

// Canonical composition (NFC).
inline std::string nfc(std::string_view s) {
  if (text_internal::is_ascii(s)) return std::string(s);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString out = norm->normalize(in, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

inline std::string lowercase(std::string_view s) {
  if (text_internal::is_ascii(s)) {
    std::string out(s);
    for (char &c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.toLower(icu::Locale::getRoot());
  std::string result;
  u.toUTF8String(result);
  return result;
}

// Byte spans of tokens: maximal runs of alphanumeric code points. Combining
// marks continue a token already in progress so decomposed letters stay whole.
inline std::vector<Span> token_spans(std::string_view text) {
  std::vector<Span> spans;
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  bool in_token = false;
  std::size_t start = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    bool word = false;
    if (c >= 0) {
      if (c < 0x80) {
        word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
               (c >= 'A' && c <= 'Z');
      } else {
        word = u_isalnum(c);
        if (!word && in_token) {
          const int8_t type = u_charType(c);
          word = type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK;
        }
      }
    }
    if (word && !in_token) {
      in_token = true;
      start = static_cast<std::size_t>(at);
    } else if (!word && in_token) {
      in_token = false;
      spans.push_back({start, static_cast<std::size_t>(at)});
    }
  }
  if (in_token) spans.push_back({start, text.size()});
  return spans;
}

// NFC, lowercased tokens. The one tokenizer used for every threshold and
// for BM25.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (const Span &span : token_spans(text)) {
    tokens.push_back(lowercase(nfc(slice(text, span))));
  }
  return tokens;
}

inline std::size_t count_tokens(std::string_view text) {
  return token_spans(text).size();
}

// Matching key for link texts, headings and fragments: NFC, lowercase,
// dash variants folded to '-', whitespace runs collapsed, ends trimmed.
inline std::string normalize_for_match(std::string_view s) {
  const std::string lowered = lowercase(nfc(s));
  const auto *p = reinterpret_cast<const uint8_t *>(lowered.data());
  const auto length = static_cast<int32_t>(lowered.size());
  std::string out;
  out.reserve(lowered.size());
  bool pending_space = false;
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(p, i, length, c);
    if (c < 0) continue;
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (text_internal::is_dash(c)) {
      out.push_back('-');
    } else {
      text_internal::append_utf8(out, c);
    }
  }
  return out;
}

// Collapses every whitespace run to one ASCII space and trims the ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      pending = !out.empty();
      continue;
    }
    if (pending) {
      out.push_back(' ');
      pending = false;
    }
    out.push_back(c);
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const char *ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace anchorpred

#endif  // ANCHORPRED_TEXT_HPP_
