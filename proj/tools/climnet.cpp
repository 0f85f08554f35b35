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

// climnet: weekly mention-graph communities, event windows, sentiment and
// topics for tweet corpora.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "climnet/pipeline.hpp"
#include "climnet/synthetic.hpp"

namespace {

struct OptionSpec {
  const char* key;
  const char* help;
};

// Every pipeline setting, keyed like the config file.
const std::vector<OptionSpec> kSettings = {
    {"format", "input format: jsonlines | csv (default: by file extension)"},
    {"output-dir", "directory for all outputs (env CLIMNET_OUTPUT_DIR)"},
    {"edges", "edge list path (default: <output-dir>/edges.csv)"},
    {"top-hashtags", "number of hashtags in hashtags.json (default 8)"},
    {"degree-threshold", "drop users with fewer incident edges over all weeks (default 100)"},
    {"degree-count", "occurrences | distinct-arcs (default occurrences)"},
    {"seed", "Louvain seed (default 42)"},
    {"seeds", "run this many consecutive seeds and write communities_spread.csv (default 1)"},
    {"lexicon", "sentiment lexicon CSV token,polarity (default: built-in)"},
    {"neutral-band", "polarities within +-band are neutral (default 0)"},
    {"stopwords", "stopword file, one word per line (default: built-in English list)"},
    {"topics", "number of NMF topics (default 10)"},
    {"batch-size", "NMF mini-batch size (default 1024)"},
    {"max-iters", "maximum NMF epochs (default 200)"},
    {"tol", "NMF relative error change tolerance (default 1e-4)"},
    {"nmf-seed", "NMF seed (default 0)"},
    {"min-df", "minimum document frequency for a term (default 2)"},
    {"top-words", "words reported per topic (default 20)"},
    {"events", "event calendar CSV name,start,end,location (default: COP13-COP25)"},
    {"window", "weeks before and after each event (default 10)"},
};

void print_result(const climnet::CommandResult& res) {
  constexpr std::size_t kMaxShown = 20;
  for (std::size_t i = 0; i < res.warnings.size() && i < kMaxShown; ++i)
    std::cerr << "warning: " << res.warnings[i] << '\n';
  if (res.warnings.size() > kMaxShown)
    std::cerr << "warning: ... " << (res.warnings.size() - kMaxShown) << " more warnings\n";
  if (res.parse_errors > 0) std::cerr << "warning: skipped " << res.parse_errors << " malformed input lines\n";
  for (const auto& p : res.written) std::cout << "wrote " << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"climnet: temporal mention-graph and text analytics for tweet corpora"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> inputs;
  bool partitions = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  app.add_option("--config", config_path, "key = value settings file; flags override it");
  auto* input_opt = app.add_option("-i,--input", inputs, "tweet files (JSON lines or CSV)");
  auto* partitions_opt = app.add_flag("--partitions", partitions, "also write per-week partitions");
  for (const auto& s : kSettings) options[s.key] = app.add_option(std::string("--") + s.key, values[s.key], s.help);

  using Command = std::function<climnet::CommandResult(const climnet::PipelineConfig&)>;
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"ingest", "parse tweets, write edges.csv and hashtags.json", climnet::cmd_ingest},
      {"communities", "weekly Louvain communities from edges.csv", climnet::cmd_communities},
      {"events", "per-event window reports from edges.csv", climnet::cmd_events},
      {"sentiment", "positive/negative/neutral distribution", climnet::cmd_sentiment},
      {"topics", "TF-IDF + mini-batch NMF topics", climnet::cmd_topics},
      {"report", "run every stage", climnet::cmd_report},
  };
  std::map<CLI::App*, Command> handlers;
  for (const auto& [name, help, fn] : commands) handlers[app.add_subcommand(name, help)] = fn;

  auto* synth = app.add_subcommand("synth", "write a deterministic synthetic tweet corpus (JSON lines)");
  std::string synth_out = "synthetic.jsonl";
  climnet::SyntheticCorpusOptions synth_opt;
  synth->add_option("-o,--out", synth_out, "output path")->capture_default_str();
  synth->add_option("--tweets", synth_opt.num_tweets, "number of tweets")->capture_default_str();
  synth->add_option("--synth-seed", synth_opt.seed, "generator seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      auto out = climnet::open_output(synth_out);
      for (const auto& r : climnet::synthetic_corpus(synth_opt)) out << climnet::to_json_line(r) << '\n';
      std::cout << "wrote " << synth_out << '\n';
      return 0;
    }

    climnet::PipelineConfig cfg;
    if (!config_path.empty()) {
      auto in = climnet::open_input(config_path);
      climnet::load_config(cfg, in);
    }
    climnet::apply_env_overrides(cfg);
    if (input_opt->count() > 0) {
      cfg.inputs.clear();
      for (const auto& p : inputs) climnet::apply_config_entry(cfg, "input", p);
    }
    if (partitions_opt->count() > 0) cfg.write_partitions = partitions;
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) climnet::apply_config_entry(cfg, key, values[key]);

    for (auto* sub : app.get_subcommands()) {
      print_result(handlers.at(sub)(cfg));
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
