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
#include <cstdlib>
#include <filesystem>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "climnet/community.hpp"
#include "climnet/events.hpp"
#include "climnet/ingest.hpp"
#include "climnet/sentiment.hpp"
#include "climnet/temporal_graph.hpp"
#include "climnet/tokenize.hpp"
#include "climnet/topics.hpp"
#include "climnet/util.hpp"

namespace climnet {

namespace fs = std::filesystem;

inline constexpr const char* kOutputDirEnv = "CLIMNET_OUTPUT_DIR";

struct PipelineConfig {
  std::vector<fs::path> inputs;
  std::optional<InputFormat> format;  // by file extension when unset
  fs::path output_dir = "climnet-out";
  std::optional<fs::path> edges;      // defaults to <output_dir>/edges.csv

  std::size_t hashtag_top_k = 8;

  std::uint64_t degree_threshold = 100;
  DegreeCount degree_count = DegreeCount::occurrences;

  std::uint64_t louvain_seed = 42;
  std::size_t louvain_seeds = 1;  // > 1 also writes the seed-spread table
  bool write_partitions = false;

  std::optional<fs::path> lexicon;
  double neutral_band = 0.0;
  std::optional<fs::path> stopwords;

  std::size_t nmf_topics = 10;
  std::size_t nmf_batch_size = 1024;
  std::size_t nmf_max_iters = 200;
  double nmf_tol = 1e-4;
  std::uint64_t nmf_seed = 0;
  std::size_t min_df = 2;
  std::size_t top_words = 20;

  std::optional<fs::path> events;  // bundled COP calendar when unset
  std::int64_t window = 10;

  fs::path edges_path() const { return edges.value_or(output_dir / "edges.csv"); }
};

namespace detail {

inline std::uint64_t config_uint(std::string_view key, std::string_view value, std::uint64_t min_value = 0) {
  std::int64_t v = 0;
  if (!parse_int64(value, v) || v < 0 || static_cast<std::uint64_t>(v) < min_value)
    throw ConfigError("'" + std::string(key) + "' expects an integer >= " + std::to_string(min_value) + ", got '" +
                      std::string(value) + "'");
  return static_cast<std::uint64_t>(v);
}

inline double config_real(std::string_view key, std::string_view value, double min_value) {
  double v = 0.0;
  if (!parse_double(value, v) || v < min_value)
    throw ConfigError("'" + std::string(key) + "' expects a number >= " + format_double(min_value) + ", got '" +
                      std::string(value) + "'");
  return v;
}

inline bool config_bool(std::string_view key, std::string_view value) {
  const auto v = ascii_lower(trim(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("'" + std::string(key) + "' expects a boolean, got '" + std::string(value) + "'");
}

}  // namespace detail

/// Applies one `key = value` setting. Keys match the CLI long flag names.
inline void apply_config_entry(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  using namespace detail;
  value = trim(value);
  if (key == "input") {
    for (const auto& p : split_list(value, ','))
      if (!trim(p).empty()) cfg.inputs.emplace_back(std::string(trim(p)));
  } else if (key == "format") {
    cfg.format = parse_input_format(value);
  } else if (key == "output-dir") {
    cfg.output_dir = std::string(value);
  } else if (key == "edges") {
    cfg.edges = fs::path(std::string(value));
  } else if (key == "top-hashtags") {
    cfg.hashtag_top_k = config_uint(key, value, 1);
  } else if (key == "degree-threshold") {
    cfg.degree_threshold = config_uint(key, value, 1);
  } else if (key == "degree-count") {
    cfg.degree_count = parse_degree_count(value);
  } else if (key == "seed") {
    cfg.louvain_seed = config_uint(key, value);
  } else if (key == "seeds") {
    cfg.louvain_seeds = config_uint(key, value, 1);
  } else if (key == "partitions") {
    cfg.write_partitions = config_bool(key, value);
  } else if (key == "lexicon") {
    cfg.lexicon = fs::path(std::string(value));
  } else if (key == "neutral-band") {
    cfg.neutral_band = config_real(key, value, 0.0);
  } else if (key == "stopwords") {
    cfg.stopwords = fs::path(std::string(value));
  } else if (key == "topics") {
    cfg.nmf_topics = config_uint(key, value, 1);
  } else if (key == "batch-size") {
    cfg.nmf_batch_size = config_uint(key, value, 1);
  } else if (key == "max-iters") {
    cfg.nmf_max_iters = config_uint(key, value, 1);
  } else if (key == "tol") {
    cfg.nmf_tol = config_real(key, value, 0.0);
  } else if (key == "nmf-seed") {
    cfg.nmf_seed = config_uint(key, value);
  } else if (key == "min-df") {
    cfg.min_df = config_uint(key, value, 1);
  } else if (key == "top-words") {
    cfg.top_words = config_uint(key, value, 1);
  } else if (key == "events") {
    cfg.events = fs::path(std::string(value));
  } else if (key == "window") {
    cfg.window = static_cast<std::int64_t>(config_uint(key, value));
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

/// Reads `key = value` lines; '#' starts a comment line.
inline void load_config(PipelineConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_config_entry(cfg, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline void apply_env_overrides(PipelineConfig& cfg) {
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') cfg.output_dir = dir;
}

/// Outcome of one command: files written and non-fatal warnings.
struct CommandResult {
  std::vector<fs::path> written;
  std::vector<std::string> warnings;
  std::size_t parse_errors = 0;

  void merge(CommandResult other) {
    written.insert(written.end(), other.written.begin(), other.written.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    parse_errors += other.parse_errors;
  }
};

namespace detail {

inline void write_text(const fs::path& path, std::string_view text, CommandResult& res) {
  auto out = open_output(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  res.written.push_back(path);
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn, CommandResult& res) {
  auto out = open_output(path);
  fn(out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  res.written.push_back(path);
}

inline std::string file_stem_for(std::string_view name) {
  std::string s;
  for (char c : name) s.push_back(is_ascii_alnum(c) || c == '-' || c == '_' ? c : '_');
  return s.empty() ? "event" : s;
}

}  // namespace detail

/// Reads every configured input; bad lines are counted and reported as warnings.
inline std::vector<TweetRecord> read_inputs(const PipelineConfig& cfg, CommandResult& res) {
  if (cfg.inputs.empty()) throw ConfigError("no input files configured");
  std::vector<TweetRecord> records;
  for (const auto& path : cfg.inputs) {
    auto in = open_input(path);
    try {
      auto r = read_all(in, cfg.format.value_or(format_for_path(path)));
      for (const auto& e : r.errors)
        res.warnings.push_back(path.string() + ":" + std::to_string(e.line) + ": " + e.reason);
      res.parse_errors += r.errors.size();
      records.insert(records.end(), std::make_move_iterator(r.records.begin()), std::make_move_iterator(r.records.end()));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ": " + e.what());
    }
  }
  return records;
}

inline CommandResult ingest_records(const PipelineConfig& cfg, const std::vector<TweetRecord>& records) {
  CommandResult res;
  std::vector<MentionEdge> edges;
  for (const auto& r : records) {
    auto e = extract_mention_edges(r);
    edges.insert(edges.end(), e.begin(), e.end());
  }
  const auto graph = build_weekly_snapshots(edges);
  detail::write_with(cfg.edges_path(), [&](std::ostream& out) { write_edge_list(out, graph); }, res);
  detail::write_text(cfg.output_dir / "hashtags.json", hashtags_json(count_hashtags(records, cfg.hashtag_top_k)), res);
  return res;
}

inline CommandResult cmd_ingest(const PipelineConfig& cfg) {
  CommandResult res;
  const auto records = read_inputs(cfg, res);
  res.merge(ingest_records(cfg, records));
  return res;
}

inline TemporalGraph load_filtered_graph(const PipelineConfig& cfg) {
  const auto path = cfg.edges_path();
  auto in = open_input(path);
  TemporalGraph g;
  try {
    g = read_edge_list(in);
  } catch (const CsvError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return filter_low_degree(g, cfg.degree_threshold, cfg.degree_count);
}

inline CommandResult cmd_communities(const PipelineConfig& cfg) {
  CommandResult res;
  const auto graph = load_filtered_graph(cfg);
  if (graph.empty())
    res.warnings.push_back("degree threshold " + std::to_string(cfg.degree_threshold) + " removed every node");
  const auto series = community_count_series(graph, cfg.louvain_seed);
  for (auto w : series.gaps) res.warnings.push_back("week " + std::to_string(w) + " has no edge weight, skipped");
  detail::write_with(cfg.output_dir / "stats.csv", [&](std::ostream& out) { write_stats(out, graph); }, res);
  detail::write_with(cfg.output_dir / "communities.csv", [&](std::ostream& out) { write_series(out, series); }, res);
  if (cfg.louvain_seeds > 1) {
    const auto spread = community_seed_spread(graph, cfg.louvain_seed, cfg.louvain_seeds);
    detail::write_with(cfg.output_dir / "communities_spread.csv",
                       [&](std::ostream& out) { write_seed_spread(out, spread); }, res);
  }
  if (cfg.write_partitions) {
    for (const auto& s : graph.snapshots()) {
      const auto p = louvain(s, cfg.louvain_seed).final_partition;
      detail::write_with(cfg.output_dir / "partitions" / ("week_" + std::to_string(s.week) + ".csv"),
                         [&](std::ostream& out) { write_partition(out, graph, s, p); }, res);
    }
  }
  return res;
}

inline std::vector<CopEvent> load_configured_events(const PipelineConfig& cfg) {
  if (!cfg.events) return bundled_cop_events();
  auto in = open_input(*cfg.events);
  EventLoad load;
  try {
    load = load_events(in);
  } catch (const CsvError& e) {
    throw IoError(cfg.events->string() + ": " + e.what());
  }
  if (!load.errors.empty()) {
    std::string msg = cfg.events->string() + ": invalid event rows:";
    for (const auto& e : load.errors) msg += " [row " + std::to_string(e.row) + ": " + e.reason + "]";
    throw ConfigError(msg);
  }
  return load.events;
}

inline CommandResult cmd_events(const PipelineConfig& cfg) {
  CommandResult res;
  const auto events = load_configured_events(cfg);
  const auto graph = load_filtered_graph(cfg);
  for (const auto& e : events) {
    const auto rows = window_report(event_window(graph, e, cfg.window), cfg.louvain_seed);
    detail::write_with(cfg.output_dir / "events" / (detail::file_stem_for(e.name) + ".csv"),
                       [&](std::ostream& out) { write_window_report(out, e, rows); }, res);
  }
  return res;
}

inline Tokenizer configured_tokenizer(const PipelineConfig& cfg) {
  if (!cfg.stopwords) return Tokenizer();
  auto in = open_input(*cfg.stopwords);
  return Tokenizer::from_stopword_stream(in);
}

inline CommandResult sentiment_records(const PipelineConfig& cfg, const std::vector<TweetRecord>& records) {
  CommandResult res;
  Lexicon lex = default_lexicon();
  if (cfg.lexicon) {
    auto in = open_input(*cfg.lexicon);
    try {
      auto load = load_lexicon(in);
      for (auto& w : load.warnings) res.warnings.push_back(cfg.lexicon->string() + ": " + w);
      lex = std::move(load.lexicon);
    } catch (const CsvError& e) {
      throw ConfigError(cfg.lexicon->string() + ": " + e.what());
    }
  }
  const auto dist = sentiment_distribution(records, lex, cfg.neutral_band, configured_tokenizer(cfg));
  detail::write_text(cfg.output_dir / "sentiment.json", distribution_json(dist), res);
  return res;
}

inline CommandResult cmd_sentiment(const PipelineConfig& cfg) {
  CommandResult res;
  const auto records = read_inputs(cfg, res);
  res.merge(sentiment_records(cfg, records));
  return res;
}

inline CommandResult topics_records(const PipelineConfig& cfg, const std::vector<TweetRecord>& records) {
  CommandResult res;
  const auto tokenizer = configured_tokenizer(cfg);
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(records.size());
  for (const auto& r : records) corpus.push_back(tokenizer(r.text));
  auto tfidf = build_tfidf(corpus, cfg.min_df);
  NmfOptions opt;
  opt.k = cfg.nmf_topics;
  opt.batch_size = cfg.nmf_batch_size;
  opt.max_iters = cfg.nmf_max_iters;
  opt.tol = cfg.nmf_tol;
  opt.seed = cfg.nmf_seed;
  const auto fit = fit_minibatch_nmf(tfidf.matrix, opt);
  if (!fit.converged)
    res.warnings.push_back("NMF stopped after " + std::to_string(cfg.nmf_max_iters) + " epochs without reaching tol");
  detail::write_text(cfg.output_dir / "topics.json", topics_json(fit.model, tfidf.vocabulary, cfg.top_words), res);
  detail::write_with(cfg.output_dir / "vocabulary.csv",
                     [&](std::ostream& out) { write_vocabulary(out, tfidf.vocabulary); }, res);
  return res;
}

inline CommandResult cmd_topics(const PipelineConfig& cfg) {
  CommandResult res;
  const auto records = read_inputs(cfg, res);
  res.merge(topics_records(cfg, records));
  return res;
}

/// Every stage in order, reading the inputs once.
inline CommandResult cmd_report(const PipelineConfig& cfg) {
  CommandResult res;
  const auto records = read_inputs(cfg, res);
  res.merge(ingest_records(cfg, records));
  res.merge(cmd_communities(cfg));
  res.merge(cmd_events(cfg));
  res.merge(sentiment_records(cfg, records));
  res.merge(topics_records(cfg, records));
  return res;
}

}  // namespace climnet
