/**
 * \file maxflow.hpp
 *
 * Per-receiver BFS augmenting-path flow decomposition on unit-capacity
 * directed multigraphs, group max-flow, the merged coding-benchmark subgraph,
 * and a brute-force min-cut oracle for small instances.
 */
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sourcecast/graph.hpp"

namespace sourcecast {

// Deterministic work counters shared by the flow and multicast searches:
// one unit per queue pop plus one per examined out-edge.
struct SearchStats {
  std::uint64_t ops = 0;
};

struct FlowDecomposition {
  NodeId receiver = 0;
  std::vector<Path> paths;  // pairwise edge-disjoint, discovery order
};

struct GroupFlowReport {
  struct PerReceiver {
    NodeId receiver;
    std::uint32_t value;  // k_i = |paths|
  };
  std::vector<PerReceiver> per_receiver;
  std::uint32_t group_k = 0;  // min over receivers; 0 iff some receiver unreachable
};

struct MergedSubgraph {
  std::vector<EdgeId> edge_set;  // union of all path edges, ascending
};

// Repeated BFS on a fresh residual state: each shortest augmenting path is
// backtracked, its edges saturated and appended. Forward arcs only; the
// reverse direction of a link is a separate arc. BFS explores adjacency in
// ascending EdgeId with a FIFO queue and restarts as soon as the receiver is
// discovered.
FlowDecomposition ek_decompose(const DirectedMultigraph& g, NodeId s, NodeId r,
                               SearchStats* stats = nullptr);

GroupFlowReport group_max_flow(std::span<const FlowDecomposition> decomps);

MergedSubgraph merge_subgraph(std::span<const FlowDecomposition> decomps);

// Exact maximum number of edge-disjoint s->r paths via enumeration of all
// s/r bipartitions (directed min cut). Independent of any search order;
// guarded to node_count <= 12.
std::uint32_t brute_force_max_flow(const DirectedMultigraph& g, NodeId s, NodeId r);

}  // namespace sourcecast
