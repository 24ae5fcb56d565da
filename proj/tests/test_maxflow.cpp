#include "sourcecast/maxflow.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "sourcecast/topology.hpp"
#include "test_support.hpp"

using namespace sourcecast;

TEST_CASE("ek_decompose on the two-way diamond") {
  // The single forward bottleneck W->r limits the decomposition to one path.
  auto g = testsupport::diamond_two_way();
  auto d = ek_decompose(g, 0, 4);
  REQUIRE(d.paths.size() == 1);
  REQUIRE(d.paths[0] == Path{0, 4, 8});  // s->U->W->r
}

TEST_CASE("ek_decompose edge cases") {
  SECTION("source without outgoing edges") {
    auto g = build_graph(2, {{1, 0}});
    REQUIRE(ek_decompose(g, 0, 1).paths.empty());
  }
  SECTION("invalid arguments") {
    auto g = build_graph(2, {{0, 1}});
    REQUIRE_THROWS_AS(ek_decompose(g, 0, 7), std::invalid_argument);
    REQUIRE_THROWS_AS(ek_decompose(g, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("ek_decompose per receiver on the adversarial fixture") {
  auto f = fixture_fig5();
  auto d1 = ek_decompose(f.graph, f.source, 5);
  REQUIRE(d1.paths.size() == 2);
  REQUIRE(d1.paths[0] == Path{0, 5});        // s->a->r1
  REQUIRE(d1.paths[1] == Path{1, 3, 4, 9});  // s->c->b->d->r1
  REQUIRE(ek_decompose(f.graph, f.source, 6).paths.size() == 2);
  REQUIRE(ek_decompose(f.graph, f.source, 7).paths.size() == 2);
}

TEST_CASE("group_max_flow") {
  auto mk = [](NodeId r, std::size_t k) {
    FlowDecomposition d;
    d.receiver = r;
    d.paths.assign(k, Path{0});
    return d;
  };
  SECTION("all equal") {
    std::vector<FlowDecomposition> ds = {mk(1, 2), mk(2, 2), mk(3, 2)};
    auto report = group_max_flow(ds);
    REQUIRE(report.group_k == 2);
    REQUIRE(report.per_receiver.size() == 3);
    REQUIRE(report.per_receiver[0].receiver == 1);
  }
  SECTION("minimum wins") {
    std::vector<FlowDecomposition> ds = {mk(1, 2), mk(2, 2), mk(3, 1)};
    REQUIRE(group_max_flow(ds).group_k == 1);
  }
  SECTION("unreachable receiver") {
    std::vector<FlowDecomposition> ds = {mk(1, 0)};
    REQUIRE(group_max_flow(ds).group_k == 0);
  }
  SECTION("empty list") {
    REQUIRE_THROWS_AS(group_max_flow({}), std::invalid_argument);
  }
}

TEST_CASE("merge_subgraph") {
  SECTION("single decomposition") {
    FlowDecomposition d;
    d.receiver = 1;
    d.paths = {{2, 5, 7}};
    std::vector<FlowDecomposition> ds = {d};
    REQUIRE(merge_subgraph(ds).edge_set == std::vector<EdgeId>{2, 5, 7});
  }
  SECTION("the adversarial fixture uses every arc") {
    auto f = fixture_fig5();
    std::vector<FlowDecomposition> ds;
    for (NodeId r : f.receivers) ds.push_back(ek_decompose(f.graph, f.source, r));
    auto merged = merge_subgraph(ds);
    REQUIRE(merged.edge_set.size() == f.graph.edge_count());
  }
  SECTION("idempotent under duplicates") {
    FlowDecomposition d;
    d.receiver = 1;
    d.paths = {{0, 1}};
    std::vector<FlowDecomposition> once = {d};
    std::vector<FlowDecomposition> twice = {d, d};
    REQUIRE(merge_subgraph(once).edge_set == merge_subgraph(twice).edge_set);
  }
}

TEST_CASE("brute_force_max_flow") {
  SECTION("single arc") {
    auto g = build_graph(2, {{0, 1}});
    REQUIRE(brute_force_max_flow(g, 0, 1) == 1);
  }
  SECTION("adversarial fixture, every receiver") {
    auto f = fixture_fig5();
    for (NodeId r : f.receivers) REQUIRE(brute_force_max_flow(f.graph, f.source, r) == 2);
  }
  SECTION("walkthrough fixture, every receiver") {
    auto f = fixture_fig4();
    for (NodeId r : f.receivers) REQUIRE(brute_force_max_flow(f.graph, f.source, r) == 2);
  }
  SECTION("unreachable") {
    auto g = build_graph(3, {{0, 1}});
    REQUIRE(brute_force_max_flow(g, 0, 2) == 0);
  }
  SECTION("size guard") {
    std::vector<Arc> arcs;
    for (NodeId v = 1; v < 13; ++v) arcs.push_back({0, v});
    auto g = build_graph(13, std::move(arcs));
    REQUIRE_THROWS_AS(brute_force_max_flow(g, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("ek_decompose agrees with the min-cut oracle", "[oracle]") {
  std::mt19937_64 rng(20240042);
  int disagreements = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t n = 2 + rng() % 7;  // n in [2, 8]
    auto g = testsupport::random_digraph(rng, n, 0.3);
    const NodeId s = 0;
    const NodeId r = 1 + rng() % (n - 1);
    auto d = ek_decompose(g, s, r);
    const auto exact = brute_force_max_flow(g, s, r);
    if (d.paths.size() != exact) {
      ++disagreements;
      UNSCOPED_INFO("witness:\n" << write_graph_json(g, s, std::vector<NodeId>{r}));
    }
    // Structural properties hold regardless of agreement.
    std::vector<std::uint8_t> used(g.edge_count(), 0);
    std::size_t prev_len = 0;
    for (const Path& p : d.paths) {
      REQUIRE(validate_path(g, s, r, p));
      REQUIRE(p.size() >= prev_len);  // augmenting path length is monotone
      prev_len = p.size();
      for (EdgeId e : p) {
        REQUIRE(used[e] == 0);
        used[e] = 1;
      }
    }
  }
  REQUIRE(disagreements == 0);
}

TEST_CASE("ek_decompose is deterministic") {
  std::mt19937_64 rng(7);
  auto g = testsupport::random_digraph(rng, 10, 0.4);
  auto a = ek_decompose(g, 0, 9);
  auto b = ek_decompose(g, 0, 9);
  REQUIRE(a.paths == b.paths);
}
