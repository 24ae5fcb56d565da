/**
 * \file topology.hpp
 *
 * Seeded random graph generators (Erdos-Renyi, Watts-Strogatz), session
 * sampling, and the two hand-transcribed fixture topologies exposed by the
 * CLI. Every undirected link is emitted as two directed arcs.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sourcecast/graph.hpp"

namespace sourcecast {

enum class GraphModel { Er, Ws };

struct TopologySpec {
  GraphModel model = GraphModel::Er;
  std::uint32_t n = 0;
  double edge_density = 0.0;  // ER: probability per undirected pair
  std::uint32_t ws_k = 0;     // WS: even mean degree, ws_k < n
  double ws_beta = 0.1;       // WS: rewiring probability
  std::uint64_t seed = 0;
};

// Samples each undirected pair independently with probability edge_density
// and emits two directed arcs per sampled pair. Deterministic per seed.
DirectedMultigraph gen_er(const TopologySpec& spec);

// Ring lattice with ws_k/2 neighbors per side, one-pass rewiring of the far
// endpoint with probability ws_beta (no self-loops or duplicate links; the
// undirected edge count n*k/2 is preserved). Two arcs per final link.
DirectedMultigraph gen_ws(const TopologySpec& spec);

DirectedMultigraph generate_topology(const TopologySpec& spec);

struct SessionSpec {
  double receiver_density = 0.25;  // receiver count = max(1, round(density*n))
  std::uint64_t seed = 0;
};

struct Session {
  NodeId source = 0;
  std::vector<NodeId> receivers;  // ascending, source excluded
};

// Source and receivers drawn uniformly without replacement.
Session sample_session(const DirectedMultigraph& g, const SessionSpec& spec);

struct Fixture {
  DirectedMultigraph graph;
  NodeId source = 0;
  std::vector<NodeId> receivers;
};

// Eight nodes, twelve arcs, one parallel source arc; all three receivers have
// min-cut two and the online construction creates four zones.
Fixture fixture_fig4();

// Eight nodes, eleven arcs; every receiver has min-cut two independently, yet
// the online construction can only deliver one unit to the last receiver.
Fixture fixture_fig5();

std::optional<Fixture> fixture_by_name(std::string_view name);

}  // namespace sourcecast
