#include "sourcecast/online.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <stdexcept>

namespace sourcecast {

namespace {

constexpr std::uint32_t kNoState = std::numeric_limits<std::uint32_t>::max();

// Search state = node * stride + key, key 0 = no active color, else color+1.
struct BfsScratch {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> pred_state;
  std::vector<EdgeId> pred_edge;
  std::vector<std::uint32_t> queue;
  std::vector<EdgeId> uncolored_buf;
  std::vector<EdgeId> colored_buf;
  std::uint32_t round = 0;
  std::uint32_t stride = 0;

  void prepare(std::uint32_t node_count, std::uint32_t stride_needed) {
    const std::size_t states = std::size_t{node_count} * stride_needed;
    if (stride_needed != stride || states > stamp.size()) {
      stride = stride_needed;
      stamp.assign(states, 0);
      pred_state.resize(states);
      pred_edge.resize(states);
      round = 0;
    }
    ++round;
    queue.clear();
  }
};

struct SearchHit {
  std::uint32_t final_state;
};

// Core of one constrained BFS round; path reconstruction happens outside.
std::optional<SearchHit> run_search(const DirectedMultigraph& g, NodeId s, NodeId r,
                                    const ResidualState& residual,
                                    const ZoneLabeling& labeling,
                                    const ColorSet& used_colors, const EdgeSet& used_edges,
                                    BfsScratch& scratch, std::uint64_t& ops) {
  const std::uint32_t stride = scratch.stride;
  const std::uint32_t start = s * stride;
  scratch.stamp[start] = scratch.round;
  scratch.pred_state[start] = kNoState;
  scratch.queue.push_back(start);

  auto discover = [&](std::uint32_t from, NodeId v, std::uint32_t key,
                      EdgeId e) -> std::optional<SearchHit> {
    const std::uint32_t st = v * stride + key;
    if (scratch.stamp[st] == scratch.round) return std::nullopt;
    scratch.stamp[st] = scratch.round;
    scratch.pred_state[st] = from;
    scratch.pred_edge[st] = e;
    if (v == r) return SearchHit{st};
    scratch.queue.push_back(st);
    return std::nullopt;
  };

  for (std::size_t qi = 0; qi < scratch.queue.size(); ++qi) {
    const std::uint32_t st = scratch.queue[qi];
    const NodeId u = st / stride;
    const std::uint32_t key = st % stride;  // 0 = no active color
    ++ops;
    scratch.uncolored_buf.clear();
    scratch.colored_buf.clear();
    for (EdgeId e : g.out_edges(u)) {
      ++ops;
      if (used_edges.contains(e)) continue;
      const ColorId ce = labeling.color_of(e).value_or(ZoneLabeling::kUncolored);
      if (ce == ZoneLabeling::kUncolored) {
        if (!residual.available(e)) continue;
        scratch.uncolored_buf.push_back(e);
      } else {
        if (used_colors.contains(ce)) continue;
        if (key != 0 && ce + 1 != key) continue;  // forbid multi-color overlap
        scratch.colored_buf.push_back(e);
      }
    }
    // An idle parallel instance of an admissible colored arc goes first: it
    // reaches the same node in an unconstrained state. Everything else keeps
    // plain ascending EdgeId order.
    for (EdgeId e : scratch.uncolored_buf) {
      bool has_colored_twin = false;
      for (EdgeId c : scratch.colored_buf) {
        if (g.head(c) == g.head(e)) {
          has_colored_twin = true;
          break;
        }
      }
      if (!has_colored_twin) continue;
      if (auto hit = discover(st, g.head(e), key, e)) return hit;
    }
    std::size_t ui = 0, ci = 0;
    while (ui < scratch.uncolored_buf.size() || ci < scratch.colored_buf.size()) {
      const bool take_uncolored =
          ci == scratch.colored_buf.size() ||
          (ui < scratch.uncolored_buf.size() &&
           scratch.uncolored_buf[ui] < scratch.colored_buf[ci]);
      if (take_uncolored) {
        const EdgeId e = scratch.uncolored_buf[ui++];
        if (auto hit = discover(st, g.head(e), key, e)) return hit;
      } else {
        const EdgeId e = scratch.colored_buf[ci++];
        const ColorId ce = *labeling.color_of(e);
        const std::uint32_t next_key = (key == 0) ? ce + 1 : key;
        if (auto hit = discover(st, g.head(e), next_key, e)) return hit;
      }
    }
  }
  return std::nullopt;
}

ConstrainedSearchResult reconstruct(const DirectedMultigraph& g, NodeId s, NodeId r,
                                    const ZoneLabeling& labeling, const BfsScratch& scratch,
                                    std::uint32_t final_state) {
  Path path;
  std::uint32_t st = final_state;
  while (st / scratch.stride != s) {
    path.push_back(scratch.pred_edge[st]);
    st = scratch.pred_state[st];
  }
  std::reverse(path.begin(), path.end());

  if (!validate_path(g, s, r, path)) {
    throw internal_error(
        "constrained_bfs reconstructed a non-simple path; offending instance:\n" +
        write_graph_json(g, s, std::vector<NodeId>{r}));
  }
  ConstrainedSearchResult out;
  out.path = std::move(path);
  for (EdgeId e : out.path) {
    if (auto c = labeling.color_of(e)) {
      if (out.inherited_color && *out.inherited_color != *c) {
        throw internal_error("constrained path touches two zones (" +
                             std::to_string(*out.inherited_color) + ", " +
                             std::to_string(*c) + ")");
      }
      out.inherited_color = *c;
    }
  }
  return out;
}

}  // namespace

std::optional<ConstrainedSearchResult> constrained_bfs(
    const DirectedMultigraph& g, NodeId s, NodeId r, const ResidualState& residual,
    const ZoneLabeling& labeling, const ColorSet& used_colors, const EdgeSet& used_edges,
    SearchStats* stats) {
  BfsScratch scratch;
  scratch.prepare(g.node_count(), labeling.zone_count() + 1);
  std::uint64_t ops = 0;
  auto hit = run_search(g, s, r, residual, labeling, used_colors, used_edges, scratch, ops);
  if (stats) stats->ops += ops;
  if (!hit) return std::nullopt;
  return reconstruct(g, s, r, labeling, scratch, hit->final_state);
}

ColorId integrate_path(const Path& path, std::optional<ColorId> inherited_color,
                       ResidualState& residual, ZoneLabeling& labeling,
                       ReceiverAccumulator& acc) {
  const ColorId c = inherited_color ? *inherited_color : labeling.fresh_color();
  for (EdgeId e : path) {
    if (!labeling.colored(e)) {
      labeling.assign(e, c);
      residual.saturate(e);
    } else {
      labeling.assign(e, c);  // throws internal_error on a color clash
    }
  }
  acc.paths.push_back(path);
  acc.colors.push_back(c);
  acc.used_colors.insert(c);
  for (EdgeId e : path) acc.used_edges.insert(e);
  if (inherited_color) ++acc.inherited;
  return c;
}

std::uint32_t OnlineResult::inherited_total() const {
  std::uint32_t total = 0;
  for (std::uint32_t x : inherited_per_receiver) total += x;
  return total;
}

PerReceiverThroughput throughput(const OnlineResult& result) {
  PerReceiverThroughput t;
  t.group_k = std::numeric_limits<std::uint32_t>::max();
  for (const auto& paths : result.per_receiver_paths) {
    t.k.push_back(static_cast<std::uint32_t>(paths.size()));
    t.group_k = std::min(t.group_k, t.k.back());
  }
  if (t.k.empty()) t.group_k = 0;
  return t;
}

OnlineResult online_construct(const DirectedMultigraph& g, NodeId s,
                              std::span<const NodeId> receivers, SearchStats* stats) {
  if (s >= g.node_count()) throw std::invalid_argument("online_construct: invalid source");
  if (receivers.empty()) throw std::invalid_argument("online_construct: no receivers");
  {
    std::vector<std::uint8_t> seen(g.node_count(), 0);
    for (NodeId r : receivers) {
      if (r >= g.node_count()) {
        throw std::invalid_argument("online_construct: receiver out of range");
      }
      if (r == s) throw std::invalid_argument("online_construct: receiver equals source");
      if (seen[r]) throw std::invalid_argument("online_construct: duplicate receiver");
      seen[r] = 1;
    }
  }

  OnlineResult result;
  result.source = s;
  result.receivers.assign(receivers.begin(), receivers.end());
  result.labeling = ZoneLabeling(g);

  ResidualState residual(g);
  BfsScratch scratch;
  std::uint64_t ops = 0;

  for (NodeId r : receivers) {
    ReceiverAccumulator acc(g.edge_count());
    while (true) {
      scratch.prepare(g.node_count(), result.labeling.zone_count() + 1);
      auto hit = run_search(g, s, r, residual, result.labeling, acc.used_colors,
                            acc.used_edges, scratch, ops);
      if (!hit) break;  // BFS exhausted for this receiver
      ConstrainedSearchResult found =
          reconstruct(g, s, r, result.labeling, scratch, hit->final_state);
      integrate_path(found.path, found.inherited_color, residual, result.labeling, acc);
    }
    result.per_receiver_paths.push_back(std::move(acc.paths));
    result.per_receiver_colors.push_back(std::move(acc.colors));
    result.inherited_per_receiver.push_back(acc.inherited);
  }

  result.multicast_edges = result.labeling.colored_edges();
  result.zone_count = result.labeling.zone_count();
  if (stats) stats->ops += ops;
  return result;
}

std::vector<std::string> check_invariants(const DirectedMultigraph& g, NodeId s,
                                          std::span<const NodeId> receivers,
                                          const OnlineResult& result) {
  std::vector<std::string> violations;
  auto fail = [&](std::string msg) { violations.push_back(std::move(msg)); };

  const std::size_t m = receivers.size();
  if (result.receivers.size() != m ||
      !std::equal(receivers.begin(), receivers.end(), result.receivers.begin())) {
    fail("receiver list mismatch between result and session");
    return violations;
  }
  if (result.per_receiver_paths.size() != m || result.per_receiver_colors.size() != m) {
    fail("per-receiver arrays do not match receiver count");
    return violations;
  }

  for (std::size_t i = 0; i < m; ++i) {
    const NodeId r = receivers[i];
    const auto& paths = result.per_receiver_paths[i];
    const auto& colors = result.per_receiver_colors[i];
    if (paths.size() != colors.size()) {
      fail("receiver " + std::to_string(r) + ": |C_i| != |P_i|");
      continue;
    }
    std::vector<std::uint8_t> edge_used(g.edge_count(), 0);
    std::vector<std::uint8_t> color_used(result.zone_count, 0);
    for (std::size_t j = 0; j < paths.size(); ++j) {
      const Path& p = paths[j];
      if (!validate_path(g, s, r, p)) {
        fail("receiver " + std::to_string(r) + " path " + std::to_string(j) +
             ": not a simple s->r path");
        continue;
      }
      // One color per path: every edge carries the path's assigned color.
      for (EdgeId e : p) {
        auto c = result.labeling.color_of(e);
        if (!c || *c != colors[j]) {
          fail("receiver " + std::to_string(r) + " path " + std::to_string(j) + " edge " +
               std::to_string(e) + ": color != assigned color " + std::to_string(colors[j]));
          break;
        }
      }
      for (EdgeId e : p) {
        if (edge_used[e]) {
          fail("receiver " + std::to_string(r) + ": edge " + std::to_string(e) +
               " shared by two of its paths");
          break;
        }
        edge_used[e] = 1;
      }
      if (colors[j] >= result.zone_count) {
        fail("receiver " + std::to_string(r) + " path " + std::to_string(j) +
             ": color id out of range");
      } else if (color_used[colors[j]]) {
        fail("receiver " + std::to_string(r) + ": color " + std::to_string(colors[j]) +
             " used by two of its paths");
      } else {
        color_used[colors[j]] = 1;
      }
    }
  }

  // E_M is exactly the colored edge set.
  if (result.multicast_edges != result.labeling.colored_edges()) {
    fail("multicast edge set differs from colored edge set");
  }
  if (result.zone_count != result.labeling.zone_count()) {
    fail("zone_count differs from labeling color count");
  }

  // Zone s-rootedness: within each color class every edge is reachable from s.
  const std::uint32_t zones = result.labeling.zone_count();
  std::vector<std::vector<EdgeId>> zone_edges(zones);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (auto c = result.labeling.color_of(e)) zone_edges[*c].push_back(e);
  }
  std::vector<std::uint32_t> reach_stamp(g.node_count(), 0);
  for (ColorId c = 0; c < zones; ++c) {
    if (zone_edges[c].empty()) {
      fail("zone " + std::to_string(c) + " is empty (colors not dense)");
      continue;
    }
    const std::uint32_t stamp = c + 1;
    reach_stamp[s] = stamp;
    std::vector<NodeId> frontier{s};
    while (!frontier.empty()) {
      NodeId u = frontier.back();
      frontier.pop_back();
      for (EdgeId e : zone_edges[c]) {
        if (g.tail(e) == u && reach_stamp[g.head(e)] != stamp) {
          reach_stamp[g.head(e)] = stamp;
          frontier.push_back(g.head(e));
        }
      }
    }
    for (EdgeId e : zone_edges[c]) {
      if (reach_stamp[g.tail(e)] != stamp) {
        fail("zone " + std::to_string(c) + " edge " + std::to_string(e) +
             " not reachable from source within its zone");
      }
    }
  }
  return violations;
}

std::string online_result_to_json(const OnlineResult& result) {
  nlohmann::ordered_json j;
  j["source"] = result.source;
  j["receivers"] = result.receivers;
  j["per_receiver_paths"] = result.per_receiver_paths;
  j["per_receiver_colors"] = result.per_receiver_colors;
  j["inherited_per_receiver"] = result.inherited_per_receiver;
  auto color_map = nlohmann::ordered_json::array();
  for (EdgeId e : result.multicast_edges) {
    color_map.push_back({e, *result.labeling.color_of(e)});
  }
  j["color_map"] = std::move(color_map);
  j["zone_count"] = result.zone_count;
  auto t = throughput(result);
  j["k"] = t.k;
  j["group_k"] = t.group_k;
  return j.dump(2) + "\n";
}

OnlineResult online_result_from_json(const std::string& text, const DirectedMultigraph& g) {
  nlohmann::json j = nlohmann::json::parse(text);
  OnlineResult result;
  result.source = j.at("source").get<NodeId>();
  result.receivers = j.at("receivers").get<std::vector<NodeId>>();
  result.per_receiver_paths = j.at("per_receiver_paths").get<std::vector<std::vector<Path>>>();
  result.per_receiver_colors =
      j.at("per_receiver_colors").get<std::vector<std::vector<ColorId>>>();
  if (j.contains("inherited_per_receiver")) {
    result.inherited_per_receiver =
        j.at("inherited_per_receiver").get<std::vector<std::uint32_t>>();
  } else {
    result.inherited_per_receiver.assign(result.receivers.size(), 0);
  }
  result.zone_count = j.at("zone_count").get<std::uint32_t>();
  result.labeling = ZoneLabeling(g);
  for (const auto& pair : j.at("color_map")) {
    EdgeId e = pair.at(0).get<EdgeId>();
    ColorId c = pair.at(1).get<ColorId>();
    if (e >= g.edge_count()) throw std::invalid_argument("color_map edge id out of range");
    if (c >= result.zone_count) throw std::invalid_argument("color_map color id out of range");
    result.labeling.assign(e, c);
  }
  result.multicast_edges = result.labeling.colored_edges();
  if (result.source >= g.node_count()) throw std::invalid_argument("source out of range");
  if (result.per_receiver_paths.size() != result.receivers.size() ||
      result.per_receiver_colors.size() != result.receivers.size()) {
    throw std::invalid_argument("per-receiver arrays do not match receiver count");
  }
  for (const auto& paths : result.per_receiver_paths) {
    for (const Path& p : paths) {
      for (EdgeId e : p) {
        if (e >= g.edge_count()) throw std::invalid_argument("path edge id out of range");
      }
    }
  }
  return result;
}

}  // namespace sourcecast
