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
#include <functional>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "climnet/csv.hpp"
#include "climnet/util.hpp"

namespace climnet {

/// One pre-collected tweet. Hashtags are stored without the leading '#'.
struct TweetRecord {
  std::string tweet_id;
  std::string author_id;
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  std::vector<std::string> mention_ids;
  std::vector<std::string> hashtags;
  std::string text;

  bool operator==(const TweetRecord&) const = default;
};

/// Directed "src mentioned dst" interaction.
struct MentionEdge {
  std::string src;
  std::string dst;
  std::int64_t timestamp = 0;
  double weight = 1.0;

  bool operator==(const MentionEdge&) const = default;
};

enum class InputFormat { jsonlines, csv };

inline InputFormat parse_input_format(std::string_view tag) {
  const auto t = ascii_lower(tag);
  if (t == "jsonlines" || t == "jsonl" || t == "json") return InputFormat::jsonlines;
  if (t == "csv") return InputFormat::csv;
  throw ConfigError("unknown input format '" + std::string(tag) + "' (expected jsonlines or csv)");
}

/// Guesses the format from a file extension: ".csv" is CSV, anything else JSON lines.
inline InputFormat format_for_path(const std::filesystem::path& path) {
  return ascii_lower(path.extension().string()) == ".csv" ? InputFormat::csv : InputFormat::jsonlines;
}

inline constexpr std::string_view kTweetCsvHeader = "tweet_id,author_id,timestamp,mentions,hashtags,text";

struct RecordError {
  std::size_t line = 0;
  std::string reason;
};

struct ParsedLine {
  std::size_t line_number = 0;
  std::variant<TweetRecord, RecordError> value;

  bool ok() const { return std::holds_alternative<TweetRecord>(value); }
  const TweetRecord& record() const { return std::get<TweetRecord>(value); }
  const RecordError& error() const { return std::get<RecordError>(value); }
};

namespace detail {

inline std::string strip_hash(std::string_view tag) {
  if (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
  return std::string(tag);
}

// Returns an error reason, or nullopt when the record satisfies its invariants.
inline std::optional<std::string> validate(const TweetRecord& r) {
  if (r.author_id.empty()) return "empty author id";
  if (r.timestamp < 0) return "negative timestamp";
  for (const auto& m : r.mention_ids)
    if (m.empty()) return "empty mention id";
  return std::nullopt;
}

inline std::variant<TweetRecord, std::string> parse_json_record(std::string_view line) {
  using nlohmann::json;
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::string("malformed JSON");
  if (!j.is_object()) return std::string("record is not a JSON object");

  TweetRecord r;
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) return std::string("missing or non-string \"id\"");
  r.tweet_id = id->get<std::string>();

  auto author = j.find("author");
  if (author == j.end() || !author->is_string()) return std::string("missing or non-string \"author\"");
  r.author_id = author->get<std::string>();

  auto ts = j.find("ts");
  if (ts == j.end() || !(ts->is_number_integer())) return std::string("missing or non-integer \"ts\"");
  if (ts->is_number_unsigned()) {
    auto u = ts->get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) return std::string("\"ts\" out of range");
    r.timestamp = static_cast<std::int64_t>(u);
  } else {
    r.timestamp = ts->get<std::int64_t>();
  }

  auto read_strings = [&](const char* key, std::vector<std::string>& out) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_array()) return std::string("\"") + key + "\" is not an array";
    for (const auto& v : *it) {
      if (!v.is_string()) return std::string("non-string element in \"") + key + "\"";
      out.push_back(v.get<std::string>());
    }
    return std::nullopt;
  };
  if (auto err = read_strings("mentions", r.mention_ids)) return *err;
  std::vector<std::string> tags;
  if (auto err = read_strings("hashtags", tags)) return *err;
  for (auto& t : tags) {
    auto s = strip_hash(t);
    if (!s.empty()) r.hashtags.push_back(std::move(s));
  }

  auto text = j.find("text");
  if (text != j.end() && !text->is_null()) {
    if (!text->is_string()) return std::string("non-string \"text\"");
    r.text = text->get<std::string>();
  }
  if (auto err = validate(r)) return *err;
  return r;
}

inline std::variant<TweetRecord, std::string> parse_csv_record(std::string_view line) {
  std::vector<std::string> f;
  try {
    f = split_csv_line(line);
  } catch (const CsvError& e) {
    return std::string(e.what());
  }
  if (f.size() != 6) return "expected 6 fields, got " + std::to_string(f.size());
  TweetRecord r;
  r.tweet_id = f[0];
  r.author_id = f[1];
  if (!parse_int64(f[2], r.timestamp)) return "bad timestamp '" + f[2] + "'";
  r.mention_ids = split_list(f[3], ';');
  for (auto& t : split_list(f[4], ';')) {
    auto s = strip_hash(t);
    if (!s.empty()) r.hashtags.push_back(std::move(s));
  }
  r.text = f[5];
  if (auto err = validate(r)) return *err;
  return r;
}

}  // namespace detail

/// Streams tweet records out of a line-oriented source. Each call to next()
/// yields one record or one per-line error; a bad line never stops the stream.
/// Blank lines are skipped. CSV input must start with the fixed header row.
class TweetReader {
 public:
  TweetReader(std::istream& in, InputFormat format) : in_(in), format_(format) {
    if (!in_.good()) throw IoError("tweet source is not readable");
  }

  std::optional<ParsedLine> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      if (format_ == InputFormat::csv && !header_seen_) {
        if (trim(line) != kTweetCsvHeader)
          throw CsvError("CSV tweet input must start with header '" + std::string(kTweetCsvHeader) + "'");
        header_seen_ = true;
        continue;
      }
      auto parsed = format_ == InputFormat::csv ? detail::parse_csv_record(line) : detail::parse_json_record(line);
      if (auto* rec = std::get_if<TweetRecord>(&parsed)) return ParsedLine{line_number_, std::move(*rec)};
      return ParsedLine{line_number_, RecordError{line_number_, std::get<std::string>(parsed)}};
    }
    if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_number_));
    return std::nullopt;
  }

 private:
  std::istream& in_;
  InputFormat format_;
  std::size_t line_number_ = 0;
  bool header_seen_ = false;
};

struct IngestResult {
  std::vector<TweetRecord> records;
  std::vector<RecordError> errors;
};

inline IngestResult read_all(std::istream& in, InputFormat format) {
  IngestResult out;
  TweetReader reader(in, format);
  while (auto item = reader.next()) {
    if (item->ok())
      out.records.push_back(std::move(std::get<TweetRecord>(item->value)));
    else
      out.errors.push_back(item->error());
  }
  return out;
}

inline std::string to_json_line(const TweetRecord& r) {
  nlohmann::json j = {{"id", r.tweet_id},        {"author", r.author_id}, {"ts", r.timestamp},
                      {"mentions", r.mention_ids}, {"hashtags", r.hashtags}, {"text", r.text}};
  return j.dump();
}

// CSV cannot carry line breaks inside a record, so text containing them is rejected.
inline std::string to_csv_line(const TweetRecord& r) {
  if (r.text.find_first_of("\r\n") != std::string::npos)
    throw std::invalid_argument("tweet text with line breaks cannot be written as CSV");
  for (const auto& list : {std::cref(r.mention_ids), std::cref(r.hashtags)})
    for (const auto& item : list.get())
      if (item.find(';') != std::string::npos)
        throw std::invalid_argument("list item '" + item + "' contains ';'");
  std::string out;
  out += csv_escape(r.tweet_id) + ',' + csv_escape(r.author_id) + ',' + std::to_string(r.timestamp) + ',';
  out += csv_escape(join_list(r.mention_ids, ';')) + ',' + csv_escape(join_list(r.hashtags, ';')) + ',';
  // Text is always quoted so empty and whitespace-only texts survive.
  out += '"';
  for (char c : r.text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<MentionEdge> extract_mention_edges(const TweetRecord& record) {
  std::vector<MentionEdge> edges;
  edges.reserve(record.mention_ids.size());
  for (const auto& m : record.mention_ids) edges.push_back({record.author_id, m, record.timestamp, 1.0});
  return edges;
}

/// Case-folded hashtag tallies.
class HashtagCounter {
 public:
  void add(const TweetRecord& r) {
    for (const auto& h : r.hashtags) {
      ++counts_[ascii_lower(h)];
      ++total_;
    }
  }

  std::size_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }

  /// Top-k by descending count; ties go to the lexicographically smaller tag.
  std::vector<std::pair<std::string, std::size_t>> top(std::size_t k) const {
    std::vector<std::pair<std::string, std::size_t>> all(counts_.begin(), counts_.end());
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (all.size() > k) all.resize(k);
    return all;
  }

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t total_ = 0;
};

template <typename Range>
std::vector<std::pair<std::string, std::size_t>> count_hashtags(const Range& records, std::size_t k) {
  if (k == 0) throw std::invalid_argument("count_hashtags: k must be >= 1");
  HashtagCounter counter;
  for (const TweetRecord& r : records) counter.add(r);
  return counter.top(k);
}

inline std::string hashtags_json(const std::vector<std::pair<std::string, std::size_t>>& top) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [tag, count] : top) arr.push_back({{"hashtag", tag}, {"count", count}});
  return arr.dump(2);
}

}  // namespace climnet
