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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "climnet/climnet.hpp"
#include "climnet/synthetic.hpp"
#include "oracles.hpp"

namespace {

using namespace climnet;
using namespace climnet::testing;
namespace fs = std::filesystem;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void run(const char* name, double limit_seconds, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) c.require(false, "took " + std::to_string(secs) + " s");
  if (!c.ok) ++failures;
  std::printf("%s  %-34s %.3fs%s%s\n", c.ok ? "PASS" : "FAIL", name, secs, c.ok ? "" : "  ", c.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Graphs on 2..8 nodes, some with self-loops.
std::vector<Snapshot> small_suite(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Snapshot> out;
  for (std::size_t g = 0; g < count; ++g) out.push_back(random_snapshot(2 + g % 7, 0.4, rng, g % 3 == 0));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  run("modularity_oracle", 5.0, [](Check& c) {
    std::mt19937_64 rng(101);
    for (const auto& s : small_suite(50, 100)) {
      const std::size_t n = s.num_nodes();
      for (int p = 0; p < 20; ++p) {
        const auto labels = random_labels(n, rng);
        const double q = modularity(s.adjacency, labels), ref = naive_modularity(s.adjacency, labels);
        c.require(std::abs(q - ref) <= 1e-12, "Q " + num(q) + " vs naive " + num(ref));
      }
    }
  });

  run("exact_fixtures", 0, [](Check& c) {
    auto near = [&](double got, double want, const char* what) {
      c.require(std::abs(got - want) <= 1e-12, std::string(what) + ": " + num(got) + " != " + num(want));
    };
    std::mt19937_64 rng(7);
    auto g = random_snapshot(7, 0.5, rng, true);
    near(modularity(g.adjacency, std::vector<CommunityId>(7, 0)), 0.0, "all-in-one");
    near(modularity(two_triangles().adjacency, std::vector<CommunityId>{0, 0, 0, 1, 1, 1}), 0.5, "two triangles");
    near(modularity(make_snapshot(2, {{0, 1, 1.0}}).adjacency, std::vector<CommunityId>{0, 1}), -0.5, "single edge");
    auto r = louvain(two_triangles_with_bridge(), 42);
    c.require(same_grouping(r.final_partition.assignment, {0, 0, 0, 1, 1, 1}), "bridge: not the triangle partition");
    near(r.final_partition.modularity, 5.0 / 14.0, "bridge Q");
  });

  run("louvain_vs_exhaustive", 10.0, [](Check& c) {
    std::mt19937_64 rng(6);
    std::size_t below = 0;
    std::string worst;
    for (int g = 0; g < 20; ++g) {
      auto s = random_snapshot(6, 0.4, rng);
      const auto best = exhaustive_best_modularity(s.adjacency);
      c.require(best.partitions_seen == 203, "enumerated " + std::to_string(best.partitions_seen) + " partitions");
      const double q = louvain(s, static_cast<std::uint64_t>(g)).final_partition.modularity;
      c.require(q <= best.modularity + 1e-12, "graph " + std::to_string(g) + " exceeds optimum");
      if (q < 0.9 * best.modularity) {
        ++below;
        worst += " graph " + std::to_string(g) + ": " + num(q) + " / " + num(best.modularity) + ";";
      }
    }
    c.require(below == 0, std::to_string(below) + "/20 below 0.9 x optimum:" + worst);
  });

  run("louvain_monotone_deterministic", 0, [](Check& c) {
    auto graphs = small_suite(50, 200);
    std::mt19937_64 rng(201);
    for (int g = 0; g < 30; ++g) graphs.push_back(random_snapshot(20 + g, 0.1, rng));
    graphs.push_back(two_cliques_with_bridge(5));
    std::uint64_t seed = 0;
    for (const auto& s : graphs) {
      if (s.adjacency.total_weight() == 0.0) continue;
      const auto a = louvain(s, seed), b = louvain(s, seed);
      ++seed;
      c.require(a.final_partition == b.final_partition && a.levels == b.levels, "equal seeds differ");
      for (std::size_t l = 1; l < a.levels.size(); ++l)
        c.require(a.levels[l].modularity >= a.levels[l - 1].modularity, "Q decreased between levels");
    }
  });

  run("scale_invariance", 0, [](Check& c) {
    std::mt19937_64 rng(301);
    for (const auto& s : small_suite(50, 300)) {
      auto arcs = s.adjacency.triplets();
      for (auto& a : arcs) a.weight *= 7.3;
      const auto scaled = make_snapshot(s.num_nodes(), arcs);
      for (int p = 0; p < 20; ++p) {
        const auto labels = random_labels(s.num_nodes(), rng);
        const double d = modularity(s.adjacency, labels) - modularity(scaled.adjacency, labels);
        c.require(std::abs(d) <= 1e-9, "difference " + num(d));
      }
    }
  });

  run("nmf", 0, [](Check& c) {
    Eigen::VectorXd h(10), w(15);
    for (int i = 0; i < 10; ++i) h(i) = 0.5 + 0.1 * i;
    for (int j = 0; j < 15; ++j) w(j) = 1.0 + (j % 4) * 0.7;
    const auto rank1 = TfidfMatrix::from_dense(h * w.transpose());
    NmfOptions opt;
    opt.k = 1;
    opt.batch_size = 10;
    opt.max_iters = 500;
    opt.tol = 1e-12;
    const auto fit1 = fit_minibatch_nmf(rank1, opt);
    const double rel = reconstruction_error(rank1, fit1.model) / rank1.values.norm();
    c.require(rel < 1e-3, "rank-1 relative error " + num(rel));

    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd d(20, 30);
    for (Eigen::Index i = 0; i < d.size(); ++i) d.data()[i] = u(rng);
    const auto x = TfidfMatrix::from_dense(d);
    NmfOptions full;
    full.k = 5;
    full.batch_size = 20;
    full.max_iters = 200;
    full.tol = 0.0;
    full.on_epoch = [&](std::size_t, const NmfModel& m, double) {
      c.require(m.W.minCoeff() >= 0.0 && m.H.minCoeff() >= 0.0, "negative factor entry");
    };
    const auto fit = fit_minibatch_nmf(x, full);
    for (std::size_t i = 1; i < fit.errors.size(); ++i)
      c.require(fit.errors[i] <= fit.errors[i - 1] + 1e-10, "full-batch error rose at epoch " + std::to_string(i + 1));

    NmfOptions mini = full;
    mini.batch_size = 6;
    mini.max_iters = 50;
    mini.seed = 17;
    const auto a = fit_minibatch_nmf(x, mini), b = fit_minibatch_nmf(x, mini);
    c.require(a.model.W == b.model.W && a.model.H == b.model.H, "seeded runs differ");
  });

  run("tfidf", 0, [](Check& c) {
    const auto r = build_tfidf({{"cat", "sat"}, {"cat", "ran"}}, 1);
    const auto cat = *r.vocabulary.find("cat"), sat = *r.vocabulary.find("sat");
    const double v_cat = r.matrix.values.coeff(0, static_cast<Eigen::Index>(cat));
    const double v_sat = r.matrix.values.coeff(0, static_cast<Eigen::Index>(sat));
    c.require(std::abs(v_cat - 0.5797) <= 1e-4, "cat " + num(v_cat));
    c.require(std::abs(v_sat - 0.8148) <= 1e-4, "sat " + num(v_sat));

    std::mt19937_64 rng(501);
    std::vector<std::vector<std::string>> corpus;
    for (int i = 0; i < 300; ++i) {
      std::vector<std::string> doc;
      for (int k = std::uniform_int_distribution<int>(0, 12)(rng); k > 0; --k)
        doc.push_back("w" + std::to_string(std::uniform_int_distribution<int>(0, 40)(rng)));
      corpus.push_back(doc);
    }
    const auto big = build_tfidf(corpus, 2);
    for (Eigen::Index i = 0; i < big.matrix.rows(); ++i) {
      const double n = big.matrix.values.row(i).norm();
      if (big.matrix.values.row(i).nonZeros() > 0) c.require(std::abs(n - 1.0) <= 1e-12, "row norm " + num(n));
    }
  });

  run("temporal_conservation", 0, [](Check& c) {
    std::mt19937_64 rng(601);
    std::vector<MentionEdge> edges;
    for (int i = 0; i < 10000; ++i)
      edges.push_back({"u" + std::to_string(rng() % 300), "u" + std::to_string(rng() % 300),
                       static_cast<std::int64_t>(1'400'000'000 + rng() % 60'000'000), 1.0});
    const auto g = build_weekly_snapshots(edges);
    c.require(g.total_weight() == 10000.0, "total weight " + num(g.total_weight()));
    for (int i = 0; i < 3; ++i) {
      std::shuffle(edges.begin(), edges.end(), rng);
      c.require(build_weekly_snapshots(edges) == g, "shuffled input built a different graph");
    }
    c.require(week_of(0) == 0 && week_of(604799) == 0 && week_of(604800) == 1, "week boundaries");
    c.require(week_of(1448841600) == 2395, "COP21 start week");
  });

  run("degree_filter", 0, [](Check& c) {
    std::vector<MentionEdge> edges;
    for (auto [name, n] : {std::pair{"n99", 99}, {"n100", 100}, {"n101", 101}})
      for (int i = 0; i < n; ++i) edges.push_back({name, "hub", i, 1.0});
    const auto f = filter_low_degree(build_weekly_snapshots(edges), 100);
    c.require(!f.node_table().find("n99"), "99 kept");
    c.require(f.node_table().find("n100").has_value(), "100 removed");
    c.require(f.node_table().find("n101").has_value(), "101 removed");

    std::vector<MentionEdge> star;
    for (int leaf = 0; leaf < 5; ++leaf) star.push_back({"center", "leaf" + std::to_string(leaf), 0, 1.0});
    c.require(filter_low_degree(build_weekly_snapshots(star), 2).empty(), "star graph not emptied");
  });

  run("event_windows", 0, [](Check& c) {
    const auto& events = bundled_cop_events();
    c.require(events.size() == 13, "calendar has " + std::to_string(events.size()) + " rows");
    std::vector<MentionEdge> edges;
    for (const auto& e : events) {
      const auto anchor = anchor_week(e);
      for (auto w = anchor - 10; w <= anchor + 10; w += 2)
        for (auto [a, b] : {std::pair{"a", "b"}, {"b", "c"}, {"c", "a"}, {"x", "y"}, {"y", "z"}, {"z", "x"}})
          edges.push_back({a, b, w * kSecondsPerWeek, 1.0});
    }
    const auto g = build_weekly_snapshots(edges);
    for (const auto& e : events) {
      const auto win = event_window(g, e, 10);
      c.require(win.positions.size() == 21, e.name + ": " + std::to_string(win.positions.size()) + " positions");
      const auto start = epoch_seconds(e.start);
      const auto& zero = win.positions.at(10);
      c.require(zero.offset == 0 && zero.week * kSecondsPerWeek <= start && start < (zero.week + 1) * kSecondsPerWeek,
                e.name + ": offset 0 misses the start week");
      for (const auto& row : window_report(win, 42))
        if (row.metrics) c.require(row.metrics->num_communities == 2, e.name + ": communities != 2");
    }
  });

  run("sentiment", 0, [](Check& c) {
    const auto& lex = default_lexicon();
    const auto neg = lex.negated();
    std::vector<std::string> words;
    for (const auto& [t, p] : lex.entries()) words.push_back(t);
    for (const char* w : {"the", "climate", "#COP21", "@someone", "http://x.co", "Good", "ice"}) words.emplace_back(w);
    std::mt19937_64 rng(701);
    std::vector<TweetRecord> records;
    for (int i = 0; i < 100; ++i) {
      TweetRecord r;
      r.author_id = "u";
      for (int k = std::uniform_int_distribution<int>(0, 10)(rng); k > 0; --k)
        r.text += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)] + " ";
      c.require(score_polarity(r.text, neg) == -score_polarity(r.text, lex), "sign symmetry fails on: " + r.text);
      records.push_back(r);
    }
    for (std::size_t n : {1u, 2u, 7u, 50u, 100u})
      for (double band : {0.0, 0.1, 0.3}) {
        const std::vector<TweetRecord> sub(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(n));
        const auto d = sentiment_distribution(sub, lex, band);
        const double sum = d.positive + d.negative + d.neutral;
        c.require(std::abs(sum - 1.0) <= 1e-12, "fractions sum to " + num(sum));
      }
  });

  run("end_to_end_determinism", 60.0, [](Check& c) {
    const auto root = fs::temp_directory_path() / "climnet_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    {
      std::ofstream out(root / "corpus.jsonl", std::ios::binary);
      for (const auto& r : synthetic_corpus()) out << to_json_line(r) << '\n';
    }
    std::vector<CommandResult> results;
    for (const char* run_dir : {"a", "b"}) {
      PipelineConfig cfg;
      cfg.inputs = {root / "corpus.jsonl"};
      cfg.output_dir = root / run_dir;
      cfg.degree_threshold = 5;
      cfg.write_partitions = true;
      results.push_back(cmd_report(cfg));
    }
    c.require(results[0].written.size() == results[1].written.size(), "different file sets");
    c.require(results[0].written.size() >= 17, "only " + std::to_string(results[0].written.size()) + " files");
    for (const auto& p : results[0].written) {
      const auto rel = fs::relative(p, root / "a");
      c.require(slurp(p) == slurp(root / "b" / rel), rel.string() + " differs");
    }
    fs::remove_all(root);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
