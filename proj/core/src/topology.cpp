#include "sourcecast/topology.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sourcecast {

namespace {

// Hand-rolled draws keep generated graphs identical across standard-library
// implementations.
double next_unit(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

DirectedMultigraph gen_er(const TopologySpec& spec) {
  if (spec.model != GraphModel::Er) throw std::invalid_argument("gen_er: model is not ER");
  if (spec.n == 0) throw std::invalid_argument("gen_er: empty node set");
  if (!(spec.edge_density > 0.0) || spec.edge_density > 1.0) {
    throw std::invalid_argument("gen_er: edge density must be in (0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Arc> arcs;
  for (NodeId i = 0; i < spec.n; ++i) {
    for (NodeId j = i + 1; j < spec.n; ++j) {
      if (next_unit(rng) < spec.edge_density) {
        arcs.push_back({i, j});
        arcs.push_back({j, i});
      }
    }
  }
  return DirectedMultigraph(spec.n, std::move(arcs));
}

DirectedMultigraph gen_ws(const TopologySpec& spec) {
  if (spec.model != GraphModel::Ws) throw std::invalid_argument("gen_ws: model is not WS");
  const std::uint32_t n = spec.n;
  const std::uint32_t k = spec.ws_k;
  if (k == 0 || k % 2 != 0) throw std::invalid_argument("gen_ws: mean degree must be even");
  if (k >= n) throw std::invalid_argument("gen_ws: mean degree must be < node count");
  if (spec.ws_beta < 0.0 || spec.ws_beta > 1.0) {
    throw std::invalid_argument("gen_ws: rewiring probability must be in [0, 1]");
  }

  std::mt19937_64 rng(spec.seed);
  struct Link {
    NodeId a, b;
  };
  std::vector<Link> links;
  links.reserve(std::size_t{n} * k / 2);
  std::vector<std::uint8_t> adj(std::size_t{n} * n, 0);
  std::vector<std::uint32_t> degree(n, 0);
  auto connect = [&](NodeId a, NodeId b, bool on) {
    adj[std::size_t{a} * n + b] = adj[std::size_t{b} * n + a] = on ? 1 : 0;
    if (on) {
      ++degree[a];
      ++degree[b];
    } else {
      --degree[a];
      --degree[b];
    }
  };
  for (std::uint32_t j = 1; j <= k / 2; ++j) {
    for (NodeId i = 0; i < n; ++i) {
      NodeId t = (i + j) % n;
      links.push_back({i, t});
      connect(i, t, true);
    }
  }
  // One scan in lattice order; only the far endpoint moves, so the link count
  // is conserved. A node already adjacent to everyone keeps its link.
  for (std::size_t idx = 0; idx < links.size(); ++idx) {
    if (next_unit(rng) >= spec.ws_beta) continue;
    const NodeId i = links[idx].a;
    if (degree[i] >= n - 1) continue;
    NodeId w;
    do {
      w = static_cast<NodeId>(next_below(rng, n));
    } while (w == i || adj[std::size_t{i} * n + w] != 0);
    connect(i, links[idx].b, false);
    connect(i, w, true);
    links[idx].b = w;
  }

  std::vector<Arc> arcs;
  arcs.reserve(links.size() * 2);
  for (const Link& l : links) {
    arcs.push_back({l.a, l.b});
    arcs.push_back({l.b, l.a});
  }
  return DirectedMultigraph(n, std::move(arcs));
}

DirectedMultigraph generate_topology(const TopologySpec& spec) {
  return spec.model == GraphModel::Er ? gen_er(spec) : gen_ws(spec);
}

Session sample_session(const DirectedMultigraph& g, const SessionSpec& spec) {
  const std::uint32_t n = g.node_count();
  if (!(spec.receiver_density > 0.0) || spec.receiver_density >= 1.0) {
    throw std::invalid_argument("sample_session: receiver density must be in (0, 1)");
  }
  const auto count = static_cast<std::uint32_t>(
      std::max(1.0, std::floor(spec.receiver_density * n + 0.5)));
  if (count >= n) {
    throw std::invalid_argument("sample_session: receiver count must be < node count");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<NodeId> perm(n);
  for (NodeId v = 0; v < n; ++v) perm[v] = v;
  // Partial Fisher-Yates: first draw is the source, the next `count` draws
  // are the receivers.
  for (std::uint32_t t = 0; t <= count; ++t) {
    const auto j = t + static_cast<std::uint32_t>(next_below(rng, n - t));
    std::swap(perm[t], perm[j]);
  }
  Session session;
  session.source = perm[0];
  session.receivers.assign(perm.begin() + 1, perm.begin() + 1 + count);
  std::sort(session.receivers.begin(), session.receivers.end());
  return session;
}

Fixture fixture_fig4() {
  // Nodes: s=0, U=1, V=2, W=3, X=4, r1=5, r2=6, r3=7.
  // The arc table order fixes the walkthrough deterministically.
  std::vector<Arc> arcs = {
      {0, 1},  // e0  s->U
      {0, 1},  // e1  s->U (parallel instance)
      {0, 2},  // e2  s->V
      {0, 4},  // e3  s->X
      {1, 3},  // e4  U->W
      {1, 6},  // e5  U->r2
      {2, 3},  // e6  V->W
      {2, 5},  // e7  V->r1
      {3, 5},  // e8  W->r1
      {3, 6},  // e9  W->r2
      {3, 7},  // e10 W->r3
      {4, 7},  // e11 X->r3
  };
  Fixture f;
  f.graph = DirectedMultigraph(8, std::move(arcs));
  f.source = 0;
  f.receivers = {5, 6, 7};
  return f;
}

Fixture fixture_fig5() {
  // Nodes: s=0, a=1, c=2, b=3, d=4, r1=5, r2=6, r3=7.
  std::vector<Arc> arcs = {
      {0, 1},  // e0  s->a
      {0, 2},  // e1  s->c
      {1, 3},  // e2  a->b
      {2, 3},  // e3  c->b
      {3, 4},  // e4  b->d
      {1, 5},  // e5  a->r1
      {1, 6},  // e6  a->r2
      {2, 6},  // e7  c->r2
      {2, 7},  // e8  c->r3
      {4, 5},  // e9  d->r1
      {4, 7},  // e10 d->r3
  };
  Fixture f;
  f.graph = DirectedMultigraph(8, std::move(arcs));
  f.source = 0;
  f.receivers = {5, 6, 7};
  return f;
}

std::optional<Fixture> fixture_by_name(std::string_view name) {
  if (name == "fig4") return fixture_fig4();
  if (name == "fig5") return fixture_fig5();
  return std::nullopt;
}

}  // namespace sourcecast
