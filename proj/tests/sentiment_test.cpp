// Copyright 2026 The climnet Authors
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

#include "climnet/sentiment.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

namespace climnet {
namespace {

Lexicon good_bad() {
  Lexicon lex;
  lex.set("good", 0.7);
  lex.set("bad", -0.7);
  return lex;
}

TweetRecord tweet(std::string text) {
  TweetRecord r;
  r.author_id = "u";
  r.text = std::move(text);
  return r;
}

std::vector<std::string> random_texts(std::size_t n, std::uint64_t seed) {
  const auto& entries = default_lexicon().entries();
  std::vector<std::string> words;
  for (const auto& [t, p] : entries) words.push_back(t);
  for (std::string w : {"the", "climate", "Paris", "#COP21", "@someone", "http://x.co/1", "GOOD", "co2"}) words.push_back(w);
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int k = std::uniform_int_distribution<int>(0, 12)(rng); k > 0; --k)
      text += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)] + " ";
    out.push_back(text);
  }
  return out;
}

TEST(ScorePolarity, NoMatchesIsZero) {
  EXPECT_EQ(score_polarity("the and of", good_bad()), 0.0);
  EXPECT_EQ(score_polarity("", good_bad()), 0.0);
}

TEST(ScorePolarity, MeanOfMatches) {
  EXPECT_NEAR(score_polarity("good good bad", good_bad()), 0.7 / 3.0, 1e-12);
  EXPECT_NEAR(score_polarity("good bad", good_bad()), 0.0, 1e-12);
  EXPECT_NEAR(score_polarity("GOOD, good!", good_bad()), 0.7, 1e-12);
}

TEST(ScorePolarity, SignSymmetry) {
  const auto& lex = default_lexicon();
  const auto neg = lex.negated();
  for (const auto& text : random_texts(100, 17)) EXPECT_EQ(score_polarity(text, neg), -score_polarity(text, lex)) << text;
}

TEST(ScorePolarity, BoundedByLexiconRange) {
  const auto& lex = default_lexicon();
  double lo = 1.0, hi = -1.0;
  for (const auto& [t, p] : lex.entries()) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  for (const auto& text : random_texts(300, 18)) {
    const double p = score_polarity(text, lex);
    if (p == 0.0) continue;
    EXPECT_GE(p, lo);
    EXPECT_LE(p, hi);
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(0.0, 0.0), SentimentLabel::neutral);
  EXPECT_EQ(classify(0.2333, 0.0), SentimentLabel::positive);
  EXPECT_EQ(classify(-0.1, 0.2), SentimentLabel::neutral);
  EXPECT_EQ(classify(-0.3, 0.2), SentimentLabel::negative);
  EXPECT_EQ(classify(0.2, 0.2), SentimentLabel::neutral);
  EXPECT_THROW(classify(0.1, -0.01), std::invalid_argument);
}

TEST(Classify, Monotone) {
  auto rank = [](SentimentLabel l) { return l == SentimentLabel::negative ? 0 : l == SentimentLabel::neutral ? 1 : 2; };
  for (double band : {0.0, 0.1, 0.5})
    for (double p = -1.0; p < 1.0; p += 0.01) EXPECT_LE(rank(classify(p, band)), rank(classify(p + 0.01, band)));
}

TEST(Distribution, NoMatchesIsAllNeutral) {
  auto d = sentiment_distribution(std::vector<TweetRecord>{tweet("nothing here")}, good_bad());
  EXPECT_EQ(d.positive, 0.0);
  EXPECT_EQ(d.negative, 0.0);
  EXPECT_EQ(d.neutral, 1.0);
}

TEST(Distribution, HalfAndHalf) {
  std::vector<TweetRecord> rs = {tweet("good"), tweet("good good bad"), tweet("bad"), tweet("bad bad good")};
  auto d = sentiment_distribution(rs, good_bad());
  EXPECT_EQ(d.positive, 0.5);
  EXPECT_EQ(d.negative, 0.5);
  EXPECT_EQ(d.neutral, 0.0);
  EXPECT_EQ(d.n, 4u);
}

TEST(Distribution, SumsToOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<TweetRecord> rs;
    for (auto& t : random_texts(1 + seed * 7, seed)) rs.push_back(tweet(t));
    for (double band : {0.0, 0.25}) {
      auto d = sentiment_distribution(rs, default_lexicon(), band);
      EXPECT_NEAR(d.positive + d.negative + d.neutral, 1.0, 1e-12);
      for (double f : {d.positive, d.negative, d.neutral}) {
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
      }
    }
  }
}

TEST(Distribution, EmptyInputIsDomainError) {
  EXPECT_THROW(sentiment_distribution(std::vector<TweetRecord>{}, good_bad()), std::domain_error);
}

TEST(Distribution, Json) {
  SentimentDistribution d{0.25, 0.5, 0.25, 4};
  EXPECT_EQ(distribution_json(d), "{\n  \"positive\": 0.25,\n  \"negative\": 0.5,\n  \"neutral\": 0.25,\n  \"n\": 4\n}");
}

TEST(Lexicon, DuplicateWarnsAndLastWins) {
  std::istringstream in("token,polarity\nGood,0.5\ngood,0.9\n");
  auto load = load_lexicon(in);
  EXPECT_EQ(load.lexicon.size(), 1u);
  EXPECT_EQ(*load.lexicon.find("good"), 0.9);
  EXPECT_EQ(load.warnings.size(), 1u);
}

TEST(Lexicon, BadRowsAreFatal) {
  for (std::string body : {"good,1.5\n", "good\n", ",0.1\n", "good,abc\n"}) {
    std::istringstream in("token,polarity\n" + body);
    EXPECT_THROW(load_lexicon(in), CsvError) << body;
  }
  std::istringstream no_header("good,0.5\n");
  EXPECT_THROW(load_lexicon(no_header), CsvError);
}

TEST(Lexicon, ShippedFileMatchesBuiltIn) {
  std::ifstream in(std::string(CLIMNET_DATA_DIR) + "/lexicon.csv");
  ASSERT_TRUE(in.good());
  auto load = load_lexicon(in);
  EXPECT_TRUE(load.warnings.empty());
  EXPECT_EQ(load.lexicon.entries(), default_lexicon().entries());
}

}  // namespace
}  // namespace climnet
