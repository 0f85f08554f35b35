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

#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "climnet/util.hpp"

namespace climnet {

inline const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "about", "above", "after", "again", "against", "all", "am", "amp", "an", "and", "any", "are", "as", "at",
      "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can", "could", "did",
      "do", "does", "doing", "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "if", "in", "into", "is",
      "it", "its", "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off",
      "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "rt", "same", "she",
      "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too", "under", "until", "up", "us", "very",
      "via", "was", "we", "were", "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with",
      "would", "you", "your", "yours", "yourself", "yourselves"};
  return words;
}

/// Splits tweet text into lowercase word tokens.
///
/// Whitespace-separated chunks starting with "http://", "https://" or '@'
/// are dropped whole. Everything else is cut into maximal ASCII alphanumeric
/// runs ('#' and other punctuation act as separators); runs shorter than two
/// characters and stopwords are discarded.
class Tokenizer {
 public:
  Tokenizer() : Tokenizer(default_stopwords()) {}

  explicit Tokenizer(const std::vector<std::string>& stopwords) {
    for (const auto& w : stopwords) stopwords_.insert(ascii_lower(w));
  }

  static Tokenizer without_stopwords() { return Tokenizer(std::vector<std::string>{}); }

  /// One stopword per line; blank lines and lines starting with '#' are skipped.
  static Tokenizer from_stopword_stream(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
      auto w = trim(line);
      if (w.empty() || w.front() == '#') continue;
      words.emplace_back(w);
    }
    return Tokenizer(words);
  }

  std::vector<std::string> operator()(std::string_view text) const {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
      while (i < n && is_space(text[i])) ++i;
      std::size_t j = i;
      while (j < n && !is_space(text[j])) ++j;
      const auto chunk = text.substr(i, j - i);
      i = j;
      if (chunk.empty() || chunk.front() == '@' || starts_with_url(chunk)) continue;
      std::size_t k = 0;
      while (k < chunk.size()) {
        while (k < chunk.size() && !is_ascii_alnum(chunk[k])) ++k;
        std::size_t e = k;
        while (e < chunk.size() && is_ascii_alnum(chunk[e])) ++e;
        if (e - k >= 2) {
          auto tok = ascii_lower(chunk.substr(k, e - k));
          if (!stopwords_.contains(tok)) tokens.push_back(std::move(tok));
        }
        k = e;
      }
    }
    return tokens;
  }

  bool is_stopword(const std::string& w) const { return stopwords_.contains(w); }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

  static bool starts_with_url(std::string_view chunk) {
    const auto lower = ascii_lower(chunk.substr(0, 8));
    return lower.starts_with("http://") || lower.starts_with("https://");
  }

  std::unordered_set<std::string> stopwords_;
};

/// Tokenizes with the default stopword list.
inline std::vector<std::string> tokenize(std::string_view text) {
  static const Tokenizer tokenizer;
  return tokenizer(text);
}

}  // namespace climnet
