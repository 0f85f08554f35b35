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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "climnet/ingest.hpp"

namespace climnet {

struct SyntheticCorpusOptions {
  std::size_t num_tweets = 1000;
  std::size_t num_groups = 4;
  std::size_t users_per_group = 12;
  std::int64_t first_timestamp = 1441065600;  // 2015-09-01T00:00:00Z
  std::size_t num_weeks = 26;
  double in_group_mention_rate = 0.85;
  std::uint64_t seed = 7;
};

/// Deterministic tweet corpus with planted structure: users talk mostly
/// within their group, each group favours one vocabulary, and texts mix
/// positive, negative and neutral wording.
inline std::vector<TweetRecord> synthetic_corpus(const SyntheticCorpusOptions& opt = {}) {
  static const std::vector<std::vector<std::string>> topic_words = {
      {"trump", "epa", "policy", "senate", "congress", "vote", "president", "government", "law", "paris"},
      {"co2", "carbon", "emissions", "arctic", "ice", "sea", "level", "melting", "temperature", "warming"},
      {"storm", "heat", "drought", "flood", "weather", "hurricane", "rain", "wildfire", "summer", "extreme"},
      {"solar", "wind", "renewable", "energy", "coal", "oil", "electric", "power", "grid", "battery"},
  };
  static const std::vector<std::string> positive = {"good", "great", "hope", "progress", "success", "love", "win"};
  static const std::vector<std::string> negative = {"bad", "disaster", "crisis", "fear", "terrible", "hoax", "worst"};
  static const std::vector<std::string> filler = {"the", "and", "of", "we", "need", "climate", "change", "today",
                                                  "world", "people", "new", "report"};
  static const std::vector<std::string> tags = {"ClimateChange", "climatechange", "COP21", "GlobalWarming",
                                                "ActOnClimate", "ParisAgreement", "sustainability", "energy"};

  std::mt19937_64 rng(opt.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
  auto user = [&](std::size_t g, std::size_t i) { return "user_" + std::to_string(g) + "_" + std::to_string(i); };
  const std::int64_t span = static_cast<std::int64_t>(opt.num_weeks) * 604800;

  std::vector<TweetRecord> out;
  out.reserve(opt.num_tweets);
  for (std::size_t t = 0; t < opt.num_tweets; ++t) {
    TweetRecord r;
    r.tweet_id = "t" + std::to_string(t);
    const std::size_t group = pick(opt.num_groups);
    const std::size_t author = pick(opt.users_per_group);
    r.author_id = user(group, author);
    r.timestamp = opt.first_timestamp + std::uniform_int_distribution<std::int64_t>(0, span - 1)(rng);

    const std::size_t num_mentions = pick(4);  // 0..3
    for (std::size_t m = 0; m < num_mentions; ++m) {
      const std::size_t g = chance(opt.in_group_mention_rate) ? group : pick(opt.num_groups);
      std::size_t u = pick(opt.users_per_group);
      if (g == group && u == author) u = (u + 1) % opt.users_per_group;
      r.mention_ids.push_back(user(g, u));
    }
    const std::size_t num_tags = pick(3);
    for (std::size_t h = 0; h < num_tags; ++h) r.hashtags.push_back(tags[pick(tags.size())]);

    std::string text;
    auto add = [&](const std::string& w) {
      if (!text.empty()) text += ' ';
      text += w;
    };
    if (!r.mention_ids.empty() && chance(0.5)) add("@" + r.mention_ids.front());
    const auto& words = topic_words[group % topic_words.size()];
    const std::size_t len = 5 + pick(6);
    for (std::size_t i = 0; i < len; ++i) add(chance(0.65) ? words[pick(words.size())] : filler[pick(filler.size())]);
    const double mood = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (mood < 0.3)
      add(positive[pick(positive.size())]);
    else if (mood < 0.5)
      add(negative[pick(negative.size())]);
    for (const auto& h : r.hashtags) add("#" + h);
    if (chance(0.3)) add("https://example.org/" + std::to_string(t));
    r.text = std::move(text);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace climnet
