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
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "climnet/temporal_graph.hpp"
#include "climnet/util.hpp"

namespace climnet {

using CommunityId = std::uint32_t;

/// Node-to-community assignment. Ids are contiguous in [0, num_communities).
struct Partition {
  std::vector<CommunityId> assignment;
  std::size_t num_communities = 0;
  double modularity = 0.0;

  bool operator==(const Partition&) const = default;
};

/// Raised when modularity is requested on a graph without edge weight.
class ModularityUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline void check_assignment(const Digraph& g, std::span<const CommunityId> assignment) {
  if (assignment.size() != g.num_nodes())
    throw std::domain_error("partition assigns " + std::to_string(assignment.size()) + " nodes, graph has " +
                            std::to_string(g.num_nodes()));
}

}  // namespace detail

/// Modularity of `assignment` on the symmetrized adjacency S = A + A^T:
///
///   Q = 1/2m * sum_ij [ S_ij - k_i k_j / 2m ] delta(c_i, c_j)
///
/// with k_i the in + out weighted degree and 2m the total weight of S.
/// Evaluated per community as sum_c [ in_c / 2m - (tot_c / 2m)^2 ].
inline double modularity(const Digraph& g, std::span<const CommunityId> assignment) {
  detail::check_assignment(g, assignment);
  const double two_m = 2.0 * g.total_weight();
  if (!(two_m > 0.0)) throw ModularityUndefined("modularity is undefined on a graph with zero total weight");
  CommunityId max_label = 0;
  for (auto c : assignment) max_label = std::max(max_label, c);
  std::vector<double> inner(assignment.empty() ? 0 : max_label + 1, 0.0);
  std::vector<double> tot(inner.size(), 0.0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (const auto& a : g.out_arcs(v)) {
      tot[assignment[v]] += a.weight;
      tot[assignment[a.target]] += a.weight;
      if (assignment[v] == assignment[a.target]) inner[assignment[v]] += 2.0 * a.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inner.size(); ++c) {
    const double frac = tot[c] / two_m;
    q += inner[c] / two_m - frac * frac;
  }
  return q;
}

inline double modularity(const Snapshot& s, const Partition& p) { return modularity(s.adjacency, p.assignment); }

/// Renumbers arbitrary labels to contiguous ids in order of first appearance
/// and evaluates their modularity (NaN when the graph has no weight).
inline Partition make_partition(const Digraph& g, std::span<const CommunityId> labels) {
  detail::check_assignment(g, labels);
  Partition p;
  p.assignment.resize(labels.size());
  std::unordered_map<CommunityId, CommunityId> remap;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = remap.emplace(labels[v], static_cast<CommunityId>(remap.size()));
    p.assignment[v] = it->second;
  }
  p.num_communities = remap.size();
  p.modularity = g.total_weight() > 0.0 ? modularity(g, p.assignment) : std::numeric_limits<double>::quiet_NaN();
  return p;
}

inline Partition singleton_partition(const Digraph& g) {
  std::vector<CommunityId> labels(g.num_nodes());
  std::iota(labels.begin(), labels.end(), CommunityId{0});
  return make_partition(g, labels);
}

/// Reported for every accepted local move; `labels` is the assignment after the move.
struct MoveEvent {
  NodeId node;
  CommunityId from;
  CommunityId to;
  double delta_q;
  std::span<const CommunityId> labels;
};

using MoveObserver = std::function<void(const MoveEvent&)>;

struct LocalMoveResult {
  Partition partition;
  bool improved = false;
};

namespace detail {

// Undirected view used by the optimizer: S_ij = A_ij + A_ji off the
// diagonal, self weight S_ii = 2 A_ii, degree k_i = sum_j S_ij.
struct SymmetricGraph {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> neighbors;
  std::vector<double> weights;
  std::vector<double> self_weight;
  std::vector<double> degree;
  double two_m = 0.0;

  explicit SymmetricGraph(const Digraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<Digraph::Triplet> sym;
    sym.reserve(2 * g.num_entries());
    self_weight.assign(n, 0.0);
    degree.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      for (const auto& a : g.out_arcs(v)) {
        degree[v] += a.weight;
        degree[a.target] += a.weight;
        if (a.target == v) {
          self_weight[v] += 2.0 * a.weight;
        } else {
          sym.push_back({v, a.target, a.weight});
          sym.push_back({a.target, v, a.weight});
        }
      }
    }
    two_m = 2.0 * g.total_weight();
    // Digraph merges (i,j) and (j,i) contributions into S_ij.
    const Digraph merged = Digraph::from_triplets(n, std::move(sym));
    offsets.assign(n + 1, 0);
    for (NodeId v = 0; v < n; ++v) {
      for (const auto& a : merged.out_arcs(v)) {
        neighbors.push_back(a.target);
        weights.push_back(a.weight);
      }
      offsets[v + 1] = neighbors.size();
    }
  }

  std::size_t size() const { return degree.size(); }
};

inline void check_order(std::span<const NodeId> order, std::size_t n) {
  if (order.size() != n) throw std::invalid_argument("node order must list every node exactly once");
  std::vector<bool> seen(n, false);
  for (auto v : order) {
    if (v >= n || seen[v]) throw std::invalid_argument("node order must be a permutation of the nodes");
    seen[v] = true;
  }
}

// Smallest modularity gain accepted as an improvement; guards termination
// against rounding noise.
inline constexpr double kMinGain = 1e-13;

inline LocalMoveResult local_move(const Digraph& g, const Partition& start, std::span<const NodeId> order,
                                  const MoveObserver& observer) {
  const std::size_t n = g.num_nodes();
  check_assignment(g, start.assignment);
  check_order(order, n);
  if (!(g.total_weight() > 0.0)) throw ModularityUndefined("local move on a graph with zero total weight");
  for (auto c : start.assignment)
    if (c >= start.num_communities) throw std::domain_error("partition label outside [0, num_communities)");

  const SymmetricGraph sg(g);
  std::vector<CommunityId> label(start.assignment.begin(), start.assignment.end());
  std::vector<double> tot(start.num_communities, 0.0);
  for (NodeId v = 0; v < n; ++v) tot[label[v]] += sg.degree[v];

  std::vector<double> link(start.num_communities, 0.0);  // k_{i,c} for the node being moved
  std::vector<CommunityId> touched;
  bool improved = false;

  bool moved = true;
  while (moved) {
    moved = false;
    for (NodeId v : order) {
      const CommunityId from = label[v];
      const double k = sg.degree[v];
      if (sg.offsets[v] == sg.offsets[v + 1]) continue;

      touched.clear();
      for (std::size_t e = sg.offsets[v]; e < sg.offsets[v + 1]; ++e) {
        const CommunityId c = label[sg.neighbors[e]];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += sg.weights[e];
      }

      // gain(c) = k_{v,c} - tot_c k_v / 2m, with v taken out of its community.
      tot[from] -= k;
      const double stay = link[from] - tot[from] * k / sg.two_m;
      CommunityId best = from;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (CommunityId c : touched) {
        if (c == from) continue;
        const double gain = link[c] - tot[c] * k / sg.two_m;
        if (gain > best_gain || (gain == best_gain && c < best)) {
          best_gain = gain;
          best = c;
        }
      }
      const double delta_q = best == from ? 0.0 : 2.0 * (best_gain - stay) / sg.two_m;
      if (best != from && delta_q > kMinGain) {
        label[v] = best;
        tot[best] += k;
        moved = improved = true;
        if (observer) observer(MoveEvent{v, from, best, delta_q, label});
      } else {
        tot[from] += k;
      }
      for (CommunityId c : touched) link[c] = 0.0;
    }
  }
  return {make_partition(g, label), improved};
}

}  // namespace detail

/// Phase one of Louvain: sweeps nodes in `order`, moving each to the
/// neighbouring community with the largest strictly positive modularity
/// gain (ties to the lowest community id), until a sweep makes no move.
inline LocalMoveResult louvain_local_move(const Snapshot& s, const Partition& p, std::span<const NodeId> order,
                                          const MoveObserver& observer = {}) {
  return detail::local_move(s.adjacency, p, order, observer);
}

/// Phase two of Louvain: one node per community, entry (c, d) summing the
/// weights of arcs from c to d. Intra-community weight becomes a self-loop.
inline Snapshot aggregate(const Snapshot& s, const Partition& p) {
  detail::check_assignment(s.adjacency, p.assignment);
  std::vector<Digraph::Triplet> triplets;
  triplets.reserve(s.adjacency.num_entries());
  for (NodeId v = 0; v < s.adjacency.num_nodes(); ++v)
    for (const auto& a : s.adjacency.out_arcs(v)) triplets.push_back({p.assignment[v], p.assignment[a.target], a.weight});
  Snapshot out;
  out.week = s.week;
  out.nodes.resize(p.num_communities);
  std::iota(out.nodes.begin(), out.nodes.end(), NodeId{0});
  out.adjacency = Digraph::from_triplets(p.num_communities, std::move(triplets));
  return out;
}

struct LouvainResult {
  Partition final_partition;     // on the snapshot's own nodes
  std::vector<Partition> levels;  // one per improving pass, each coarser than the previous
  std::size_t passes = 0;        // local-move phases run, including the last non-improving one
};

/// Full Louvain: local moves and aggregation alternate until a local-move
/// phase finds no improvement. Each pass visits nodes in a fresh permutation
/// drawn from a generator seeded with `seed`.
inline LouvainResult louvain(const Snapshot& s, std::uint64_t seed) {
  if (!(s.adjacency.total_weight() > 0.0)) throw ModularityUndefined("louvain: snapshot has no edge weight");
  std::mt19937_64 rng(seed);
  LouvainResult result;

  std::vector<CommunityId> to_current(s.num_nodes());
  std::iota(to_current.begin(), to_current.end(), CommunityId{0});
  Snapshot current = s;

  while (true) {
    std::vector<NodeId> order(current.num_nodes());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    ++result.passes;
    auto moved = louvain_local_move(current, singleton_partition(current.adjacency), order);
    if (!moved.improved) break;
    for (auto& c : to_current) c = moved.partition.assignment[c];
    result.levels.push_back(make_partition(s.adjacency, to_current));
    current = aggregate(current, moved.partition);
  }

  if (result.levels.empty()) result.levels.push_back(singleton_partition(s.adjacency));
  result.final_partition = result.levels.back();
  return result;
}

struct CommunitySeriesRow {
  WeekIndex week = 0;
  std::size_t num_communities = 0;
  double modularity = 0.0;

  bool operator==(const CommunitySeriesRow&) const = default;
};

struct CommunitySeries {
  std::vector<CommunitySeriesRow> rows;
  std::vector<WeekIndex> gaps;  // snapshots skipped for having no edge weight
};

inline CommunitySeries community_count_series(const TemporalGraph& g, std::uint64_t seed) {
  CommunitySeries out;
  for (const auto& s : g.snapshots()) {
    if (!(s.adjacency.total_weight() > 0.0)) {
      out.gaps.push_back(s.week);
      continue;
    }
    const auto r = louvain(s, seed);
    out.rows.push_back({s.week, r.final_partition.num_communities, r.final_partition.modularity});
  }
  return out;
}

/// Spread of Louvain outcomes over `num_seeds` consecutive seeds.
struct SeedSpreadRow {
  WeekIndex week = 0;
  std::size_t seeds = 0;
  std::size_t min_communities = 0;
  std::size_t max_communities = 0;
  double mean_communities = 0.0;
  double min_modularity = 0.0;
  double max_modularity = 0.0;
  double mean_modularity = 0.0;
};

inline std::vector<SeedSpreadRow> community_seed_spread(const TemporalGraph& g, std::uint64_t first_seed,
                                                        std::size_t num_seeds) {
  if (num_seeds == 0) throw std::invalid_argument("community_seed_spread: need at least one seed");
  std::vector<SeedSpreadRow> rows;
  for (const auto& s : g.snapshots()) {
    if (!(s.adjacency.total_weight() > 0.0)) continue;
    SeedSpreadRow row;
    row.week = s.week;
    row.seeds = num_seeds;
    row.min_communities = std::numeric_limits<std::size_t>::max();
    row.min_modularity = std::numeric_limits<double>::infinity();
    row.max_modularity = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < num_seeds; ++i) {
      const auto p = louvain(s, first_seed + i).final_partition;
      row.min_communities = std::min(row.min_communities, p.num_communities);
      row.max_communities = std::max(row.max_communities, p.num_communities);
      row.mean_communities += static_cast<double>(p.num_communities);
      row.min_modularity = std::min(row.min_modularity, p.modularity);
      row.max_modularity = std::max(row.max_modularity, p.modularity);
      row.mean_modularity += p.modularity;
    }
    row.mean_communities /= static_cast<double>(num_seeds);
    row.mean_modularity /= static_cast<double>(num_seeds);
    rows.push_back(row);
  }
  return rows;
}

inline void write_partition(std::ostream& out, const TemporalGraph& g, const Snapshot& s, const Partition& p) {
  out << "node_id,community_id\n";
  for (NodeId v = 0; v < s.num_nodes(); ++v)
    write_csv_row(out, {g.external_id(s, v), std::to_string(p.assignment.at(v))});
}

inline void write_series(std::ostream& out, const CommunitySeries& series) {
  out << "week,num_communities,modularity\n";
  for (const auto& r : series.rows) out << r.week << ',' << r.num_communities << ',' << format_double(r.modularity) << '\n';
}

inline void write_seed_spread(std::ostream& out, const std::vector<SeedSpreadRow>& rows) {
  out << "week,seeds,min_communities,max_communities,mean_communities,min_modularity,max_modularity,mean_modularity\n";
  for (const auto& r : rows)
    out << r.week << ',' << r.seeds << ',' << r.min_communities << ',' << r.max_communities << ','
        << format_double(r.mean_communities) << ',' << format_double(r.min_modularity) << ','
        << format_double(r.max_modularity) << ',' << format_double(r.mean_modularity) << '\n';
}

}  // namespace climnet
