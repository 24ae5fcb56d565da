#include "sourcecast/graph.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sourcecast {

DirectedMultigraph::DirectedMultigraph(std::uint32_t node_count, std::vector<Arc> arcs)
    : node_count_(node_count), arcs_(std::move(arcs)) {
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    if (a.tail >= node_count_ || a.head >= node_count_) {
      throw std::invalid_argument("edge " + std::to_string(i) + " endpoint out of range");
    }
    if (a.tail == a.head) {
      throw std::invalid_argument("edge " + std::to_string(i) + " is a self-loop");
    }
  }
  offsets_.assign(node_count_ + 1, 0);
  for (const Arc& a : arcs_) ++offsets_[a.tail + 1];
  for (std::uint32_t u = 0; u < node_count_; ++u) offsets_[u + 1] += offsets_[u];
  adjacency_.resize(arcs_.size());
  std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Scanning arcs in id order keeps each adjacency list ascending.
  for (EdgeId e = 0; e < arcs_.size(); ++e) {
    adjacency_[cursor[arcs_[e].tail]++] = e;
  }
}

DirectedMultigraph build_graph(std::uint32_t node_count, std::vector<Arc> arcs) {
  return DirectedMultigraph(node_count, std::move(arcs));
}

void ZoneLabeling::assign(EdgeId e, ColorId c) {
  if (color_[e] != kUncolored && color_[e] != c) {
    throw internal_error("attempt to recolor edge " + std::to_string(e) + " from color " +
                         std::to_string(color_[e]) + " to " + std::to_string(c));
  }
  color_[e] = c;
  if (c >= next_color_) next_color_ = c + 1;
}

std::vector<EdgeId> ZoneLabeling::colored_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < color_.size(); ++e) {
    if (color_[e] != kUncolored) out.push_back(e);
  }
  return out;
}

bool validate_path(const DirectedMultigraph& g, NodeId s, NodeId r, const Path& p) {
  if (p.empty()) return false;
  for (EdgeId e : p) {
    if (e >= g.edge_count()) return false;
  }
  if (g.tail(p.front()) != s || g.head(p.back()) != r) return false;
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  seen[g.tail(p.front())] = 1;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j + 1 < p.size() && g.head(p[j]) != g.tail(p[j + 1])) return false;
    NodeId v = g.head(p[j]);
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

namespace {

const char* const kPalette[12] = {"blue",        "darkgreen", "red",     "orange",
                                  "purple",      "saddlebrown", "deepskyblue", "magenta",
                                  "olive",       "deeppink",  "teal",    "goldenrod"};

}  // namespace

std::string to_dot(const DirectedMultigraph& g, const ZoneLabeling* labeling,
                   NodeId source, std::span<const NodeId> receivers) {
  if (labeling != nullptr && labeling->edge_count() != g.edge_count()) {
    throw std::invalid_argument("labeling does not match graph edge count");
  }
  std::vector<std::uint8_t> is_receiver(g.node_count(), 0);
  for (NodeId r : receivers) {
    if (r >= g.node_count()) throw std::invalid_argument("receiver out of range");
    is_receiver[r] = 1;
  }
  if (source >= g.node_count()) throw std::invalid_argument("source out of range");

  std::ostringstream out;
  out << "digraph multicast {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == source) {
      out << "  n" << v << " [shape=triangle,style=filled,fillcolor=lemonchiffon];\n";
    } else if (is_receiver[v]) {
      out << "  n" << v << " [style=filled,fillcolor=palegreen];\n";
    } else {
      out << "  n" << v << ";\n";
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out << "  n" << g.tail(e) << " -> n" << g.head(e);
    if (labeling != nullptr) {
      if (auto c = labeling->color_of(e)) {
        out << " [color=" << kPalette[*c % 12] << ",penwidth=1.6,tooltip=\"zone " << *c
            << "\"]";
      }
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

using nlohmann::json;

NodeId node_from_json(const json& j, std::uint32_t node_count, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer");
  }
  auto v = j.get<std::uint64_t>();
  if (v >= node_count) {
    throw std::invalid_argument(std::string(what) + " out of range: " + std::to_string(v));
  }
  return static_cast<NodeId>(v);
}

}  // namespace

GraphFile read_graph_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object() || !j.contains("n") || !j.contains("arcs")) {
    throw std::invalid_argument("graph JSON must be an object with fields 'n' and 'arcs'");
  }
  std::uint32_t n = j.at("n").get<std::uint32_t>();
  std::vector<Arc> arcs;
  for (const json& pair : j.at("arcs")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("each arc must be a [tail, head] pair");
    }
    arcs.push_back(Arc{node_from_json(pair[0], n, "arc tail"),
                       node_from_json(pair[1], n, "arc head")});
  }
  GraphFile out;
  out.graph = DirectedMultigraph(n, std::move(arcs));
  if (j.contains("source")) out.source = node_from_json(j.at("source"), n, "source");
  if (j.contains("receivers")) {
    for (const json& r : j.at("receivers")) {
      out.receivers.push_back(node_from_json(r, n, "receiver"));
    }
  }
  return out;
}

GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return read_graph_json(buf.str());
}

std::string write_graph_json(const DirectedMultigraph& g, std::optional<NodeId> source,
                             std::span<const NodeId> receivers) {
  nlohmann::ordered_json j;
  j["n"] = g.node_count();
  auto arcs = nlohmann::ordered_json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    arcs.push_back({g.tail(e), g.head(e)});
  }
  j["arcs"] = std::move(arcs);
  if (source) j["source"] = *source;
  if (!receivers.empty()) {
    j["receivers"] = std::vector<NodeId>(receivers.begin(), receivers.end());
  }
  return j.dump(2) + "\n";
}

}  // namespace sourcecast
