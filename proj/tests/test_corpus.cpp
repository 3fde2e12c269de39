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


#include "anchorpred/corpus.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"

namespace anchorpred {
namespace {

TEST(ParseArticleTest, ParagraphsSectionAndLink) {
  const Article a = parse_article("Ancient", "Ancient",
                                  "Intro para.\n\n== History ==\nSee [[Rome|the city]].");
  ASSERT_EQ(a.paragraphs.size(), 2u);
  ASSERT_EQ(a.sections.size(), 1u);
  EXPECT_EQ(a.sections[0].heading, "History");
  EXPECT_EQ(a.sections[0].level, 1);
  ASSERT_EQ(a.links.size(), 1u);
  EXPECT_EQ(a.links[0].text, "the city");
  EXPECT_EQ(a.links[0].target_id, "Rome");
  EXPECT_FALSE(a.links[0].target_fragment);
  EXPECT_EQ(slice(a.text, a.links[0].span), "the city");
  EXPECT_EQ(a.text, "Intro para.\n\nHistory\n\nSee the city.");
  EXPECT_FALSE(a.paragraphs[0].section);
  EXPECT_EQ(a.paragraphs[1].section, 0u);
}

TEST(ParseArticleTest, SectionFragment) {
  const Article a = parse_article(
      "Savoy", "Savoy", "The first hotel in London with [[Elevator#History|hydraulic lifts]].");
  ASSERT_EQ(a.links.size(), 1u);
  EXPECT_EQ(a.links[0].target_id, "Elevator");
  EXPECT_EQ(a.links[0].target_fragment, "History");
  EXPECT_EQ(a.links[0].text, "hydraulic lifts");
}

TEST(ParseArticleTest, BareLinkUsesTargetAsText) {
  const Article a = parse_article("x", "x", "See [[Rome]] now.");
  ASSERT_EQ(a.links.size(), 1u);
  EXPECT_EQ(a.links[0].text, "Rome");
  EXPECT_EQ(a.text, "See Rome now.");
}

TEST(ParseArticleTest, SelfLinkTargetsOwnArticle) {
  const Article a = parse_article("x", "x", "== Usage ==\nSee [[#Usage|above]].");
  ASSERT_EQ(a.links.size(), 1u);
  EXPECT_EQ(a.links[0].target_id, "x");
  EXPECT_EQ(a.links[0].target_fragment, "Usage");
}

TEST(ParseArticleTest, SingleParagraphNoHeadings) {
  const Article a = parse_article("x", "x", "Just one paragraph here.");
  EXPECT_EQ(a.paragraphs.size(), 1u);
  EXPECT_TRUE(a.sections.empty());
  const auto c = candidate_anchors(a);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].index, 0u);
  EXPECT_TRUE(c[0].is_lead);
}

TEST(ParseArticleTest, LinesJoinWithinParagraph) {
  const Article a = parse_article("x", "x", "first line\n  second line  \n\n\nnext");
  ASSERT_EQ(a.paragraphs.size(), 2u);
  EXPECT_EQ(slice(a.text, a.paragraphs[0].span), "first line second line");
  EXPECT_EQ(slice(a.text, a.paragraphs[1].span), "next");
}

TEST(ParseArticleTest, NestedSectionsAndSpans) {
  const Article a = parse_article(
      "x", "x", "lead\n\n== A ==\na1\n\n=== B ===\nb1\n\n== C ==\nc1");
  ASSERT_EQ(a.sections.size(), 3u);
  EXPECT_EQ(a.sections[1].parent, 0u);
  EXPECT_EQ(a.sections[1].level, 2);
  EXPECT_EQ(a.sections[1].heading_path, (std::vector<std::string>{"A", "B"}));
  EXPECT_FALSE(a.sections[2].parent);
  // A spans its own heading through b1.
  EXPECT_EQ(slice(a.text, a.sections[0].span), "A\n\na1\n\nB\n\nb1");
  EXPECT_EQ(slice(a.text, a.sections[2].span), "C\n\nc1");
}

struct BadBody {
  const char *body;
  std::size_t line;
};

class ParseErrorTest : public ::testing::TestWithParam<BadBody> {};

TEST_P(ParseErrorTest, ReportsLine) {
  try {
    parse_article("x", "x", GetParam().body);
    FAIL() << "expected a parse error";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), GetParam().line) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(
    Malformed, ParseErrorTest,
    ::testing::Values(BadBody{"ok\n\nsee [[Rome|city", 3},        // unclosed
                      BadBody{"a [[b [[c]] d]]", 1},               // nested
                      BadBody{"a [[|text]]", 1},                    // empty target
                      BadBody{"a [[Rome| ]]", 1},                   // empty text
                      BadBody{"x\n== History =", 2},                // unbalanced
                      BadBody{"= Top =", 1},                        // level 0
                      BadBody{"== ==", 1},                          // empty heading
                      BadBody{"a\n\n====", 3}));                    // only '='

TEST(LoadCorpusTest, DuplicateIdNamesLine) {
  const std::string jsonl = fixtures::record("A", "one") + fixtures::record("B", "two") +
                            fixtures::record("A", "three");
  try {
    fixtures::corpus_from_string(jsonl);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(LoadCorpusTest, BodyErrorNamesRecordLine) {
  const std::string jsonl = fixtures::record("A", "one") + fixtures::record("B", "x [[y");
  try {
    fixtures::corpus_from_string(jsonl);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadCorpusTest, InvalidJson) {
  EXPECT_THROW(fixtures::corpus_from_string("{not json}\n"), ParseError);
  EXPECT_THROW(fixtures::corpus_from_string("{\"id\": \"x\"}\n"), ParseError);
}

TEST(LoadCorpusTest, InlinksCountDistinctOtherSources) {
  const std::string jsonl = fixtures::record("T", "[[T|self]]") +
                            fixtures::record("A", "[[T|one]] and [[T#H|two]]") +
                            fixtures::record("B", "[[T|three]] [[Missing|gone]]");
  const Corpus c = fixtures::corpus_from_string(jsonl);
  EXPECT_EQ(c.at("T").inlink_count, 2u);
  EXPECT_EQ(c.at("A").inlink_count, 0u);
}

TEST(CandidateAnchorsTest, FiveParagraphs) {
  const Article a = parse_article("x", "x", "p0\n\n== S ==\np1\n\np2\n\n== T ==\np3\n\np4");
  const auto c = candidate_anchors(a);
  ASSERT_EQ(c.size(), 5u);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].index, i);
  EXPECT_TRUE(c[0].is_lead);
  EXPECT_FALSE(c[1].is_lead);
  EXPECT_EQ(c[3].section_heading_path, (std::vector<std::string>{"T"}));
}

TEST(CandidateAnchorsTest, ReferencesExcluded) {
  const Article a = parse_article(
      "x", "x", "lead\n\n== Body ==\nb1\n\n== References ==\nref one\n\nref two");
  const auto c = candidate_anchors(a);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(slice(a.text, c[0].span), "lead");
  EXPECT_EQ(slice(a.text, c[1].span), "b1");
}

TEST(CandidateAnchorsTest, StoplistCoversSubsectionsAndVariants) {
  const Article a = parse_article(
      "x", "x",
      "lead\n\n== See Also ==\ns\n\n=== More ===\nm\n\n== External  links ==\ne\n\n== Notes "
      "==\nn\n\n== Further reading ==\nf\n\n== Bibliography ==\nb\n\n== Sources ==\nz\n\n== "
      "Kept ==\nk");
  const auto c = candidate_anchors(a);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(slice(a.text, c[1].span), "k");
}

TEST(CandidateAnchorsTest, LeadOnly) {
  const auto c = candidate_anchors(parse_article("x", "x", "only lead"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].is_lead);
}

TEST(CandidateAnchorsTest, ZeroParagraphsIsError) {
  EXPECT_THROW(candidate_anchors(parse_article("x", "x", "== A ==\n\n== B ==")), DataError);
  EXPECT_THROW(candidate_anchors(parse_article("x", "x", "")), DataError);
}

TEST(LinkContextTest, WindowTwo) {
  const Article a = parse_article("s", "s", "a b [[T|LINK]] c d e");
  ASSERT_EQ(a.links.size(), 1u);
  EXPECT_EQ(link_context(a, a.links[0], 2), "a b LINK c d");
}

TEST(LinkContextTest, LeftClippedAtArticleStart) {
  const Article a = parse_article("s", "s", "[[T|LINK]] c d e");
  EXPECT_EQ(link_context_span(a, a.links[0], 50).begin, 0u);
  EXPECT_EQ(link_context(a, a.links[0], 50), "LINK c d e");
}

TEST(LinkContextTest, ContractErrors) {
  const Article a = parse_article("s", "s", "a [[T|LINK]] b");
  EXPECT_THROW(link_context(a, a.links[0], 0), ContractError);
  Link outside = a.links[0];
  outside.span = {10, 400};
  EXPECT_THROW(link_context(a, outside, 3), ContractError);
}

TEST(LinkContextTest, MatchesTokenEnumerationOnFixture) {
  std::size_t checked = 0;
  for (const Article &a : fixtures::corpus().articles()) {
    for (const Link &l : a.links) {
      for (std::size_t w : {1u, 2u, 5u, 50u}) {
        EXPECT_EQ(link_context(a, l, w), oracle::context(a.text, l.span.begin, l.span.end, w));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 500u);
}

TEST(DebugJsonTest, RoundTripOnFixture) {
  for (const Article &a : fixtures::corpus().articles()) {
    const auto j = article_to_json(a);
    const Article back = article_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back, a) << a.id;
  }
}

TEST(MarkupTest, ParseIsIdempotentThroughMarkup) {
  for (const Article &a : fixtures::corpus().articles()) {
    const Article once = parse_article(a.id, a.title, to_markup(a));
    const Article twice = parse_article(a.id, a.title, to_markup(once));
    EXPECT_EQ(once.text, a.text) << a.id;
    EXPECT_EQ(once.links, a.links) << a.id;
    EXPECT_EQ(once.sections, a.sections) << a.id;
    EXPECT_EQ(once.paragraphs, a.paragraphs) << a.id;
    EXPECT_EQ(twice, once) << a.id;
  }
}

TEST(MarkupTest, RandomDocumentsRoundTrip) {
  std::mt19937 rng(7);
  const std::vector<std::string> words = {"alpha", "beta", "Gamma", "d\xC3\xA9lta", "x1", "42"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string body;
    const int blocks = 1 + static_cast<int>(rng() % 8);
    for (int b = 0; b < blocks; ++b) {
      if (b) body += "\n\n";
      if (rng() % 4 == 0) {
        const std::string eq(2 + rng() % 3, '=');
        body += eq + " " + words[rng() % words.size()] + " " + eq;
        continue;
      }
      const int n = 1 + static_cast<int>(rng() % 10);
      for (int w = 0; w < n; ++w) {
        if (w) body += (rng() % 5 == 0) ? "\n" : " ";
        if (rng() % 4 == 0) {
          body += "[[" + words[rng() % words.size()] +
                  (rng() % 2 ? "#" + words[rng() % words.size()] : "") + "|" +
                  words[rng() % words.size()] + "]]";
        } else {
          body += words[rng() % words.size()];
        }
      }
    }
    const Article a = parse_article("doc", "doc", body);
    EXPECT_EQ(parse_article("doc", "doc", to_markup(a)), a) << body;
  }
}

}  // namespace
}  // namespace anchorpred
