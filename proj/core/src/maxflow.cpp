#include "sourcecast/maxflow.hpp"

#include <algorithm>
#include <stdexcept>

namespace sourcecast {

namespace {

constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

}  // namespace

FlowDecomposition ek_decompose(const DirectedMultigraph& g, NodeId s, NodeId r,
                               SearchStats* stats) {
  if (s >= g.node_count() || r >= g.node_count()) {
    throw std::invalid_argument("ek_decompose: node id out of range");
  }
  if (s == r) throw std::invalid_argument("ek_decompose: source equals receiver");

  FlowDecomposition out;
  out.receiver = r;
  ResidualState residual(g);

  std::vector<NodeId> pred_node(g.node_count());
  std::vector<EdgeId> pred_edge(g.node_count());
  std::vector<std::uint32_t> stamp(g.node_count(), 0);
  std::uint32_t round = 0;
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  std::uint64_t ops = 0;

  while (true) {
    ++round;
    queue.clear();
    queue.push_back(s);
    stamp[s] = round;
    bool augmented = false;
    for (std::size_t qi = 0; qi < queue.size() && !augmented; ++qi) {
      NodeId u = queue[qi];
      ++ops;
      for (EdgeId e : g.out_edges(u)) {
        ++ops;
        if (!residual.available(e)) continue;
        NodeId v = g.head(e);
        if (stamp[v] == round) continue;
        stamp[v] = round;
        pred_node[v] = u;
        pred_edge[v] = e;
        if (v == r) {
          Path p;
          for (NodeId x = r; x != s; x = pred_node[x]) {
            EdgeId ex = pred_edge[x];
            p.push_back(ex);
            residual.saturate(ex);
          }
          std::reverse(p.begin(), p.end());
          out.paths.push_back(std::move(p));
          augmented = true;
          break;
        }
        queue.push_back(v);
      }
    }
    if (!augmented) break;
  }
  if (stats) stats->ops += ops;
  return out;
}

GroupFlowReport group_max_flow(std::span<const FlowDecomposition> decomps) {
  if (decomps.empty()) {
    throw std::invalid_argument("group_max_flow: empty receiver list");
  }
  GroupFlowReport report;
  report.group_k = std::numeric_limits<std::uint32_t>::max();
  for (const FlowDecomposition& d : decomps) {
    auto k = static_cast<std::uint32_t>(d.paths.size());
    report.per_receiver.push_back({d.receiver, k});
    report.group_k = std::min(report.group_k, k);
  }
  return report;
}

MergedSubgraph merge_subgraph(std::span<const FlowDecomposition> decomps) {
  MergedSubgraph merged;
  for (const FlowDecomposition& d : decomps) {
    for (const Path& p : d.paths) {
      merged.edge_set.insert(merged.edge_set.end(), p.begin(), p.end());
    }
  }
  std::sort(merged.edge_set.begin(), merged.edge_set.end());
  merged.edge_set.erase(std::unique(merged.edge_set.begin(), merged.edge_set.end()),
                        merged.edge_set.end());
  return merged;
}

std::uint32_t brute_force_max_flow(const DirectedMultigraph& g, NodeId s, NodeId r) {
  if (g.node_count() > 12) {
    throw std::invalid_argument("brute_force_max_flow: graph too large (node count > 12)");
  }
  if (s >= g.node_count() || r >= g.node_count() || s == r) {
    throw std::invalid_argument("brute_force_max_flow: invalid source/receiver");
  }
  const std::uint32_t n = g.node_count();
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  // Every subset S with s in S and r not in S; cut value = arcs leaving S.
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!(mask & (1u << s)) || (mask & (1u << r))) continue;
    std::uint32_t cut = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if ((mask & (1u << g.tail(e))) && !(mask & (1u << g.head(e)))) ++cut;
    }
    best = std::min(best, cut);
  }
  return best;
}

}  // namespace sourcecast
