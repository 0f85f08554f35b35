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
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "climnet/csv.hpp"
#include "climnet/ingest.hpp"
#include "climnet/util.hpp"

namespace climnet {

using NodeId = std::uint32_t;
using WeekIndex = std::int64_t;

inline constexpr std::int64_t kSecondsPerWeek = 604800;

/// Fixed 7-day buckets anchored at the Unix epoch.
inline WeekIndex week_of(std::int64_t timestamp) {
  if (timestamp < 0) throw std::domain_error("week_of: negative timestamp " + std::to_string(timestamp));
  return timestamp / kSecondsPerWeek;
}

/// Weighted directed adjacency in compressed sparse row form. Each row holds
/// its arcs sorted by target with strictly positive weights; parallel arcs
/// are merged at construction.
class Digraph {
 public:
  struct Arc {
    NodeId target = 0;
    double weight = 0.0;
    bool operator==(const Arc&) const = default;
  };

  struct Triplet {
    NodeId src = 0;
    NodeId dst = 0;
    double weight = 0.0;
  };

  Digraph() : offsets_(1, 0) {}

  /// Builds the graph on nodes [0, num_nodes). Duplicate (src, dst) pairs are
  /// summed in a canonical order so the result does not depend on the input order.
  static Digraph from_triplets(std::size_t num_nodes, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
      if (t.src >= num_nodes || t.dst >= num_nodes) throw std::out_of_range("Digraph: arc endpoint out of range");
      if (!(t.weight > 0.0) || !std::isfinite(t.weight)) throw std::invalid_argument("Digraph: arc weight must be positive and finite");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.src, a.dst, a.weight) < std::tie(b.src, b.dst, b.weight);
    });
    Digraph g;
    g.offsets_.assign(num_nodes + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
      std::size_t j = i;
      double w = 0.0;
      while (j < triplets.size() && triplets[j].src == triplets[i].src && triplets[j].dst == triplets[i].dst)
        w += triplets[j++].weight;
      g.arcs_.push_back({triplets[i].dst, w});
      ++g.offsets_[triplets[i].src + 1];
      g.total_weight_ += w;
      i = j;
    }
    for (std::size_t v = 0; v < num_nodes; ++v) g.offsets_[v + 1] += g.offsets_[v];
    return g;
  }

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_entries() const { return arcs_.size(); }
  double total_weight() const { return total_weight_; }

  std::span<const Arc> out_arcs(NodeId v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }

  /// Weight of arc (src, dst), 0 when absent.
  double weight(NodeId src, NodeId dst) const {
    auto row = out_arcs(src);
    auto it = std::lower_bound(row.begin(), row.end(), dst, [](const Arc& a, NodeId t) { return a.target < t; });
    return (it != row.end() && it->target == dst) ? it->weight : 0.0;
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(arcs_.size());
    for (NodeId v = 0; v < num_nodes(); ++v)
      for (const auto& a : out_arcs(v)) out.push_back({v, a.target, a.weight});
    return out;
  }

  bool operator==(const Digraph&) const = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
  double total_weight_ = 0.0;
};

/// One week of the mention network. Local index i of `adjacency` is the
/// global node `nodes[i]`; `nodes` is sorted ascending.
struct Snapshot {
  WeekIndex week = 0;
  std::vector<NodeId> nodes;
  Digraph adjacency;

  std::size_t num_nodes() const { return nodes.size(); }
  bool operator==(const Snapshot&) const = default;
};

/// Bijection between external user ids and dense node indices.
class NodeTable {
 public:
  NodeTable() = default;

  /// `ids` must be sorted and unique; index i maps to ids[i].
  explicit NodeTable(std::vector<std::string> ids) : ids_(std::move(ids)) {
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], static_cast<NodeId>(i));
  }

  std::size_t size() const { return ids_.size(); }
  const std::string& id(NodeId n) const { return ids_.at(n); }
  const std::vector<std::string>& ids() const { return ids_; }

  std::optional<NodeId> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const NodeTable& o) const { return ids_ == o.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
};

/// An aggregated (src, dst, week, weight) row, the edge-list interchange unit.
struct WeeklyEdge {
  std::string src;
  std::string dst;
  WeekIndex week = 0;
  double weight = 1.0;
};

class TemporalGraph {
 public:
  TemporalGraph() = default;

  /// Groups edges by week and sums parallel edges. External ids are interned
  /// in lexicographic order, so any permutation of `edges` builds the same graph.
  static TemporalGraph from_weekly_edges(std::vector<WeeklyEdge> edges) {
    std::vector<std::string> ids;
    ids.reserve(edges.size() * 2);
    for (const auto& e : edges) {
      if (e.src.empty() || e.dst.empty()) throw std::invalid_argument("edge with empty endpoint id");
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw std::invalid_argument("edge weight must be positive and finite");
      ids.push_back(e.src);
      ids.push_back(e.dst);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    TemporalGraph g;
    g.table_ = NodeTable(std::move(ids));

    struct Row {
      WeekIndex week;
      NodeId src, dst;
      double weight;
    };
    std::vector<Row> rows;
    rows.reserve(edges.size());
    for (const auto& e : edges) rows.push_back({e.week, *g.table_.find(e.src), *g.table_.find(e.dst), e.weight});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.week, a.src, a.dst, a.weight) < std::tie(b.week, b.src, b.dst, b.weight);
    });

    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      while (j < rows.size() && rows[j].week == rows[i].week) ++j;
      Snapshot s;
      s.week = rows[i].week;
      for (std::size_t r = i; r < j; ++r) {
        s.nodes.push_back(rows[r].src);
        s.nodes.push_back(rows[r].dst);
      }
      std::sort(s.nodes.begin(), s.nodes.end());
      s.nodes.erase(std::unique(s.nodes.begin(), s.nodes.end()), s.nodes.end());
      auto local = [&](NodeId global) {
        return static_cast<NodeId>(std::lower_bound(s.nodes.begin(), s.nodes.end(), global) - s.nodes.begin());
      };
      std::vector<Digraph::Triplet> triplets;
      triplets.reserve(j - i);
      for (std::size_t r = i; r < j; ++r) triplets.push_back({local(rows[r].src), local(rows[r].dst), rows[r].weight});
      s.adjacency = Digraph::from_triplets(s.nodes.size(), std::move(triplets));
      g.snapshots_.push_back(std::move(s));
      i = j;
    }
    return g;
  }

  const NodeTable& node_table() const { return table_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  std::size_t size() const { return snapshots_.size(); }
  bool empty() const { return snapshots_.empty(); }

  const Snapshot* find(WeekIndex week) const {
    auto it = std::lower_bound(snapshots_.begin(), snapshots_.end(), week,
                               [](const Snapshot& s, WeekIndex w) { return s.week < w; });
    return (it != snapshots_.end() && it->week == week) ? &*it : nullptr;
  }

  const std::string& external_id(const Snapshot& s, NodeId local) const { return table_.id(s.nodes.at(local)); }

  /// All adjacency entries as external-id rows, ordered by (week, src, dst).
  std::vector<WeeklyEdge> weekly_edges() const {
    std::vector<WeeklyEdge> out;
    for (const auto& s : snapshots_)
      for (const auto& t : s.adjacency.triplets())
        out.push_back({table_.id(s.nodes[t.src]), table_.id(s.nodes[t.dst]), s.week, t.weight});
    return out;
  }

  double total_weight() const {
    double w = 0.0;
    for (const auto& s : snapshots_) w += s.adjacency.total_weight();
    return w;
  }

  bool operator==(const TemporalGraph&) const = default;

 private:
  NodeTable table_;
  std::vector<Snapshot> snapshots_;
};

template <typename Range>
TemporalGraph build_weekly_snapshots(const Range& mention_edges) {
  std::vector<WeeklyEdge> rows;
  for (const MentionEdge& e : mention_edges) rows.push_back({e.src, e.dst, week_of(e.timestamp), e.weight});
  return TemporalGraph::from_weekly_edges(std::move(rows));
}

/// How a node's activity is measured by the degree filter.
enum class DegreeCount {
  occurrences,    // summed incident weight, in + out (raw mention count for unit weights)
  distinct_arcs,  // number of nonzero incident adjacency entries, in + out, over all weeks
};

inline DegreeCount parse_degree_count(std::string_view tag) {
  if (tag == "occurrences") return DegreeCount::occurrences;
  if (tag == "distinct-arcs" || tag == "distinct_arcs") return DegreeCount::distinct_arcs;
  throw ConfigError("unknown degree counting mode '" + std::string(tag) + "'");
}

/// Per-node incident totals over every snapshot, indexed by global node id.
/// A self-loop counts once as outgoing and once as incoming.
inline std::vector<double> incident_totals(const TemporalGraph& g, DegreeCount mode = DegreeCount::occurrences) {
  std::vector<double> total(g.node_table().size(), 0.0);
  for (const auto& s : g.snapshots()) {
    for (NodeId v = 0; v < s.num_nodes(); ++v) {
      for (const auto& a : s.adjacency.out_arcs(v)) {
        const double c = mode == DegreeCount::occurrences ? a.weight : 1.0;
        total[s.nodes[v]] += c;
        total[s.nodes[a.target]] += c;
      }
    }
  }
  return total;
}

/// Drops every node whose incident total in `g` is below `threshold`, with
/// all its entries. Totals are measured once on the input graph; removal
/// does not cascade. Snapshots left without entries are dropped.
inline TemporalGraph filter_low_degree(const TemporalGraph& g, std::uint64_t threshold = 100,
                                       DegreeCount mode = DegreeCount::occurrences) {
  if (threshold == 0) throw std::invalid_argument("filter_low_degree: threshold must be >= 1");
  const auto totals = incident_totals(g, mode);
  std::vector<bool> keep(totals.size());
  for (std::size_t v = 0; v < totals.size(); ++v) keep[v] = totals[v] >= static_cast<double>(threshold);

  std::vector<WeeklyEdge> rows;
  for (const auto& s : g.snapshots())
    for (const auto& t : s.adjacency.triplets())
      if (keep[s.nodes[t.src]] && keep[s.nodes[t.dst]])
        rows.push_back({g.node_table().id(s.nodes[t.src]), g.node_table().id(s.nodes[t.dst]), s.week, t.weight});
  return TemporalGraph::from_weekly_edges(std::move(rows));
}

struct SnapshotStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;  // distinct directed arcs, self-loops excluded
  double density = 0.0;       // num_edges / (n (n - 1))
  double total_weight = 0.0;  // includes self-loops
};

inline SnapshotStats snapshot_stats(const Snapshot& s) {
  SnapshotStats st;
  st.num_nodes = s.num_nodes();
  st.total_weight = s.adjacency.total_weight();
  for (NodeId v = 0; v < s.adjacency.num_nodes(); ++v)
    for (const auto& a : s.adjacency.out_arcs(v))
      if (a.target != v) ++st.num_edges;
  if (st.num_nodes >= 2) {
    const double n = static_cast<double>(st.num_nodes);
    st.density = static_cast<double>(st.num_edges) / (n * (n - 1.0));
  }
  return st;
}

inline constexpr std::string_view kEdgeListHeader = "src,dst,week,weight";
inline constexpr std::string_view kStatsHeader = "week,num_nodes,num_edges,density,total_weight";

inline void write_edge_list(std::ostream& out, const TemporalGraph& g) {
  out << kEdgeListHeader << '\n';
  for (const auto& e : g.weekly_edges())
    write_csv_row(out, {e.src, e.dst, std::to_string(e.week), format_double(e.weight)});
}

inline TemporalGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<WeeklyEdge> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!header) {
      if (trim(line) != kEdgeListHeader) throw CsvError("edge list must start with header '" + std::string(kEdgeListHeader) + "'");
      header = true;
      continue;
    }
    auto where = [&] { return "edge list line " + std::to_string(line_no) + ": "; };
    std::vector<std::string> f;
    try {
      f = split_csv_line(line);
    } catch (const CsvError& e) {
      throw CsvError(where() + e.what());
    }
    if (f.size() != 4) throw CsvError(where() + "expected 4 fields");
    WeeklyEdge e{f[0], f[1], 0, 0.0};
    if (e.src.empty() || e.dst.empty()) throw CsvError(where() + "empty node id");
    if (!parse_int64(f[2], e.week)) throw CsvError(where() + "bad week '" + f[2] + "'");
    if (!parse_double(f[3], e.weight) || !(e.weight > 0.0)) throw CsvError(where() + "bad weight '" + f[3] + "'");
    rows.push_back(std::move(e));
  }
  if (in.bad()) throw IoError("read failure in edge list");
  return TemporalGraph::from_weekly_edges(std::move(rows));
}

inline void write_stats(std::ostream& out, const TemporalGraph& g) {
  out << kStatsHeader << '\n';
  for (const auto& s : g.snapshots()) {
    const auto st = snapshot_stats(s);
    out << s.week << ',' << st.num_nodes << ',' << st.num_edges << ',' << format_double(st.density) << ','
        << format_double(st.total_weight) << '\n';
  }
}

}  // namespace climnet
