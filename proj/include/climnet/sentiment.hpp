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

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "climnet/csv.hpp"
#include "climnet/ingest.hpp"
#include "climnet/tokenize.hpp"
#include "climnet/util.hpp"

namespace climnet {

/// Token polarities in [-1, +1], keyed by lowercase token.
class Lexicon {
 public:
  Lexicon() = default;

  /// Returns false when `token` was already present (the new value wins).
  bool set(std::string_view token, double polarity) {
    if (token.empty()) throw std::invalid_argument("lexicon token must be non-empty");
    if (!(polarity >= -1.0 && polarity <= 1.0)) throw std::invalid_argument("lexicon polarity outside [-1, 1]");
    auto [it, inserted] = entries_.insert_or_assign(ascii_lower(token), polarity);
    return inserted;
  }

  const double* find(const std::string& token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, double>& entries() const { return entries_; }

  Lexicon negated() const {
    Lexicon out;
    for (const auto& [t, p] : entries_) out.entries_.emplace(t, -p);
    return out;
  }

 private:
  std::map<std::string, double> entries_;
};

struct LexiconLoad {
  Lexicon lexicon;
  std::vector<std::string> warnings;
};

/// Reads a "token,polarity" CSV. Bad rows are fatal; duplicate tokens keep the
/// last value and add a warning.
inline LexiconLoad load_lexicon(std::istream& in) {
  LexiconLoad out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!header) {
      if (ascii_lower(trim(line)) != "token,polarity") throw CsvError("lexicon must start with header 'token,polarity'");
      header = true;
      continue;
    }
    const auto where = "lexicon line " + std::to_string(line_no) + ": ";
    std::vector<std::string> f;
    try {
      f = split_csv_line(line);
    } catch (const CsvError& e) {
      throw CsvError(where + e.what());
    }
    if (f.size() != 2) throw CsvError(where + "expected 2 fields");
    const auto token = std::string(trim(f[0]));
    double polarity = 0.0;
    if (token.empty()) throw CsvError(where + "empty token");
    if (!parse_double(f[1], polarity) || polarity < -1.0 || polarity > 1.0)
      throw CsvError(where + "polarity must be a number in [-1, 1]");
    if (!out.lexicon.set(token, polarity)) out.warnings.push_back(where + "duplicate token '" + token + "', last value wins");
  }
  if (in.bad()) throw IoError("read failure in lexicon");
  return out;
}

inline constexpr std::string_view kDefaultLexiconCsv = R"(token,polarity
abundant,0.5
afraid,-0.6
agree,0.4
alarming,-0.6
amazing,0.8
angry,-0.7
awesome,0.8
awful,-0.8
bad,-0.7
beautiful,0.8
benefit,0.5
best,0.9
better,0.5
brilliant,0.8
catastrophe,-0.9
catastrophic,-0.9
celebrate,0.7
clean,0.4
collapse,-0.7
concern,-0.3
concerned,-0.3
crisis,-0.6
damage,-0.6
dangerous,-0.7
dead,-0.7
death,-0.7
denial,-0.4
destroy,-0.8
destruction,-0.8
disaster,-0.8
doom,-0.8
encouraging,0.6
excellent,0.9
exciting,0.6
fail,-0.6
failed,-0.6
failure,-0.7
fake,-0.5
fear,-0.6
fight,-0.2
fraud,-0.8
glad,0.6
good,0.7
great,0.8
happy,0.8
hate,-0.8
healthy,0.6
hoax,-0.7
hope,0.5
hopeful,0.6
horrible,-0.9
improve,0.5
improving,0.5
innovation,0.5
inspiring,0.7
kill,-0.8
lie,-0.6
lies,-0.6
love,0.8
nice,0.6
opportunity,0.5
optimistic,0.6
pollution,-0.5
poor,-0.5
positive,0.6
progress,0.6
protect,0.5
proud,0.6
risk,-0.4
sad,-0.6
safe,0.5
scary,-0.6
solution,0.5
stupid,-0.7
succeed,0.6
success,0.7
support,0.4
terrible,-0.9
thanks,0.5
threat,-0.6
tragic,-0.8
ugly,-0.6
victory,0.7
win,0.6
wonderful,0.9
worried,-0.5
worse,-0.6
worst,-0.9
wrong,-0.5
)";

/// Small general-purpose lexicon used when no lexicon file is configured.
inline const Lexicon& default_lexicon() {
  static const Lexicon lex = [] {
    std::istringstream in{std::string(kDefaultLexiconCsv)};
    return load_lexicon(in).lexicon;
  }();
  return lex;
}

/// Mean polarity of the tokens of `text` found in `lex`, 0 when none match.
inline double score_polarity(std::string_view text, const Lexicon& lex, const Tokenizer& tokenizer) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& tok : tokenizer(text)) {
    if (const double* p = lex.find(tok)) {
      sum += *p;
      ++hits;
    }
  }
  return hits == 0 ? 0.0 : sum / static_cast<double>(hits);
}

inline double score_polarity(std::string_view text, const Lexicon& lex) {
  static const Tokenizer tokenizer;
  return score_polarity(text, lex, tokenizer);
}

enum class SentimentLabel { positive, negative, neutral };

inline std::string_view to_string(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::positive: return "positive";
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
  }
  return "neutral";
}

inline SentimentLabel classify(double polarity, double neutral_band = 0.0) {
  if (!(neutral_band >= 0.0)) throw std::invalid_argument("neutral band must be non-negative");
  if (polarity > neutral_band) return SentimentLabel::positive;
  if (polarity < -neutral_band) return SentimentLabel::negative;
  return SentimentLabel::neutral;
}

struct SentimentDistribution {
  double positive = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
  std::size_t n = 0;
};

template <typename Range>
SentimentDistribution sentiment_distribution(const Range& records, const Lexicon& lex, double neutral_band,
                                             const Tokenizer& tokenizer) {
  std::size_t pos = 0, neg = 0, neu = 0;
  for (const TweetRecord& r : records) {
    switch (classify(score_polarity(r.text, lex, tokenizer), neutral_band)) {
      case SentimentLabel::positive: ++pos; break;
      case SentimentLabel::negative: ++neg; break;
      case SentimentLabel::neutral: ++neu; break;
    }
  }
  const std::size_t n = pos + neg + neu;
  if (n == 0) throw std::domain_error("sentiment_distribution: no records");
  const double d = static_cast<double>(n);
  return {static_cast<double>(pos) / d, static_cast<double>(neg) / d, static_cast<double>(neu) / d, n};
}

template <typename Range>
SentimentDistribution sentiment_distribution(const Range& records, const Lexicon& lex, double neutral_band = 0.0) {
  static const Tokenizer tokenizer;
  return sentiment_distribution(records, lex, neutral_band, tokenizer);
}

inline std::string distribution_json(const SentimentDistribution& d) {
  nlohmann::ordered_json j = {{"positive", d.positive}, {"negative", d.negative}, {"neutral", d.neutral}, {"n", d.n}};
  return j.dump(2);
}

}  // namespace climnet
