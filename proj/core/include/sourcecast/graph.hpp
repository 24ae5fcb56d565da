/**
 * \file graph.hpp
 *
 * Directed multigraph with explicit parallel edge instances, unit-capacity
 * residual bookkeeping, zone (color) labeling and path primitives shared by
 * the flow and multicast construction algorithms.
 */
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sourcecast {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using ColorId = std::uint32_t;

struct Arc {
  NodeId tail;
  NodeId head;

  bool operator==(const Arc&) const = default;
};

// A path is an ordered sequence of edge instances. Validity (chained,
// node-simple, correct endpoints) is checked by validate_path.
using Path = std::vector<EdgeId>;

// Immutable after construction; every edge instance is an independent
// unit-capacity resource. Parallel arcs are distinct EdgeIds. Out-adjacency
// lists are kept in ascending EdgeId order, which fixes BFS tie-breaking
// globally.
class DirectedMultigraph {
 public:
  DirectedMultigraph() = default;

  // Throws std::invalid_argument on out-of-range endpoints or self-loops.
  DirectedMultigraph(std::uint32_t node_count, std::vector<Arc> arcs);

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t edge_count() const { return static_cast<std::uint32_t>(arcs_.size()); }

  NodeId tail(EdgeId e) const { return arcs_[e].tail; }
  NodeId head(EdgeId e) const { return arcs_[e].head; }
  const Arc& arc(EdgeId e) const { return arcs_[e]; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::span<const EdgeId> out_edges(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }

  std::uint32_t out_degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  bool operator==(const DirectedMultigraph& other) const {
    return node_count_ == other.node_count_ && arcs_ == other.arcs_;
  }

 private:
  std::uint32_t node_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::uint32_t> offsets_;  // CSR offsets, size node_count_+1
  std::vector<EdgeId> adjacency_;       // EdgeIds grouped by tail, ascending
};

DirectedMultigraph build_graph(std::uint32_t node_count, std::vector<Arc> arcs);

// Per-edge remaining capacity. Unit capacities: an edge is either available
// or saturated, and saturation is irreversible (no reverse-arc augmentation;
// bidirectionality is modeled as two distinct arcs).
class ResidualState {
 public:
  ResidualState() = default;
  explicit ResidualState(const DirectedMultigraph& g)
      : available_(g.edge_count(), std::uint8_t{1}) {}

  bool available(EdgeId e) const { return available_[e] != 0; }
  void saturate(EdgeId e) { available_[e] = 0; }
  std::size_t size() const { return available_.size(); }

 private:
  std::vector<std::uint8_t> available_;
};

// Partial map edge -> color. Colors are allocated densely (0,1,2,...) and an
// edge, once colored, can never change color.
class ZoneLabeling {
 public:
  ZoneLabeling() = default;
  explicit ZoneLabeling(const DirectedMultigraph& g)
      : color_(g.edge_count(), kUncolored) {}
  explicit ZoneLabeling(std::size_t edge_count) : color_(edge_count, kUncolored) {}

  bool colored(EdgeId e) const { return color_[e] != kUncolored; }
  std::optional<ColorId> color_of(EdgeId e) const {
    if (color_[e] == kUncolored) return std::nullopt;
    return color_[e];
  }

  ColorId fresh_color() { return next_color_++; }

  // Throws internal_error when recoloring an edge with a different color.
  void assign(EdgeId e, ColorId c);

  std::uint32_t zone_count() const { return next_color_; }
  std::size_t edge_count() const { return color_.size(); }

  // Colored edges in ascending EdgeId order.
  std::vector<EdgeId> colored_edges() const;

  static constexpr ColorId kUncolored = std::numeric_limits<ColorId>::max();

 private:
  std::vector<ColorId> color_;
  ColorId next_color_ = 0;
};

// True iff p is nonempty, chained, node-simple, starts at s and ends at r.
bool validate_path(const DirectedMultigraph& g, NodeId s, NodeId r, const Path& p);

// Deterministic DOT rendering. The source is drawn as a triangle, receivers
// as filled green circles; colored edges carry a color attribute keyed by
// ColorId (12-color palette, cycled).
std::string to_dot(const DirectedMultigraph& g, const ZoneLabeling* labeling,
                   NodeId source, std::span<const NodeId> receivers);

// JSON graph file: {"n": int, "arcs": [[tail, head], ...],
//                   "source": int?, "receivers": [int, ...]?}
struct GraphFile {
  DirectedMultigraph graph;
  std::optional<NodeId> source;
  std::vector<NodeId> receivers;
};

GraphFile read_graph_json(const std::string& text);
GraphFile load_graph_file(const std::string& path);
std::string write_graph_json(const DirectedMultigraph& g, std::optional<NodeId> source,
                             std::span<const NodeId> receivers);

// Raised when an algorithm detects a state that its own invariants rule out
// (recoloring, multi-color overlap, non-simple reconstructed path). Carries a
// diagnostic dump of the offending instance.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sourcecast
