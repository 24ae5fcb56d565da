/**
 * \file online.hpp
 *
 * Online color-constrained multicast construction: receivers are integrated
 * sequentially, each through repeated constrained BFS rounds over shared
 * residual and zone state. A path is either disjoint (fresh zone), aligned
 * with exactly one existing zone (inherits its color), or redirected at the
 * first zone it touches; multi-zone overlap is pruned during the search.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sourcecast/graph.hpp"
#include "sourcecast/maxflow.hpp"

namespace sourcecast {

// Colors already consumed by one receiver (one color per path).
class ColorSet {
 public:
  bool contains(ColorId c) const { return c < used_.size() && used_[c] != 0; }
  void insert(ColorId c) {
    if (c >= used_.size()) used_.resize(c + 1, 0);
    used_[c] = 1;
  }

 private:
  std::vector<std::uint8_t> used_;
};

// Edges already reserved by one receiver (edge-disjoint paths).
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t edge_count) : used_(edge_count, 0) {}
  bool contains(EdgeId e) const { return used_[e] != 0; }
  void insert(EdgeId e) { used_[e] = 1; }

 private:
  std::vector<std::uint8_t> used_;
};

struct ConstrainedSearchResult {
  Path path;
  // The unique preexisting color on the path, absent for a disjoint path.
  std::optional<ColorId> inherited_color;
};

// One BFS round over (node, active-color) states starting from (s, none).
//
// From state (u, c*), edge e=(u,v) is admissible iff e is not in used_edges,
// color(e) is not in used_colors, and either e is uncolored with residual
// capacity, or e is colored and c* is unset or equals color(e). The successor
// state carries color(e) when the path touches its first zone, else c*.
// Expansion follows ascending EdgeId with a FIFO queue, with one refinement:
// an admissible uncolored arc that is the parallel twin of an admissible
// colored arc is tried first, since it reaches the same node without taking
// on that zone's constraint.
//
// Returns the shortest admissible path on reaching r, or nullopt when the
// search is exhausted. Throws internal_error if the reconstructed path is not
// node-simple or carries more than one preexisting color.
std::optional<ConstrainedSearchResult> constrained_bfs(
    const DirectedMultigraph& g, NodeId s, NodeId r, const ResidualState& residual,
    const ZoneLabeling& labeling, const ColorSet& used_colors, const EdgeSet& used_edges,
    SearchStats* stats = nullptr);

// Per-receiver bookkeeping filled by integrate_path.
struct ReceiverAccumulator {
  explicit ReceiverAccumulator(std::size_t edge_count) : used_edges(edge_count) {}
  std::vector<Path> paths;      // P_i
  std::vector<ColorId> colors;  // color of paths[j]
  ColorSet used_colors;         // C_i
  EdgeSet used_edges;           // E_i
  std::uint32_t inherited = 0;
};

// Colors the path (fresh color when inherited_color is absent), saturates its
// previously-uncolored edges and appends to the receiver accumulators.
// Previously-colored edges are untouched: they were saturated when their zone
// was created and already carry the zone's symbol. Returns the path's color.
ColorId integrate_path(const Path& path, std::optional<ColorId> inherited_color,
                       ResidualState& residual, ZoneLabeling& labeling,
                       ReceiverAccumulator& acc);

struct OnlineResult {
  NodeId source = 0;
  std::vector<NodeId> receivers;  // processing order
  std::vector<std::vector<Path>> per_receiver_paths;
  std::vector<std::vector<ColorId>> per_receiver_colors;
  std::vector<std::uint32_t> inherited_per_receiver;  // Omega-inheritance events
  std::vector<EdgeId> multicast_edges;                // E_M = colored edges, ascending
  ZoneLabeling labeling;
  std::uint32_t zone_count = 0;

  std::uint32_t k(std::size_t i) const {
    return static_cast<std::uint32_t>(per_receiver_paths[i].size());
  }
  std::uint32_t inherited_total() const;
};

struct PerReceiverThroughput {
  std::vector<std::uint32_t> k;
  std::uint32_t group_k = 0;
};

PerReceiverThroughput throughput(const OnlineResult& result);

// Processes receivers strictly in the given order, repeating constrained_bfs
// for each until it fails. Deterministic for fixed input.
OnlineResult online_construct(const DirectedMultigraph& g, NodeId s,
                              std::span<const NodeId> receivers,
                              SearchStats* stats = nullptr);

// Structural self-checks over a constructed result: path validity, one color
// per path, per-receiver color distinctness and edge-disjointness, zone
// s-rootedness, E_M consistency. Empty list iff all hold; each violation
// names the invariant and a witness.
std::vector<std::string> check_invariants(const DirectedMultigraph& g, NodeId s,
                                          std::span<const NodeId> receivers,
                                          const OnlineResult& result);

// JSON serialization consumed by the CLI verify / export-dot subcommands.
std::string online_result_to_json(const OnlineResult& result);
OnlineResult online_result_from_json(const std::string& text, const DirectedMultigraph& g);

}  // namespace sourcecast
