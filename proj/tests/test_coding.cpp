#include "sourcecast/coding.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "sourcecast/online.hpp"
#include "sourcecast/topology.hpp"
#include "test_support.hpp"

using namespace sourcecast;

namespace {

// A three-zone, K=2 construction where each receiver sees two of the three
// zones: C = {0,1}, {2,0}, {1,2} in path order.
OnlineResult three_zone_result() {
  auto g = testsupport::three_zone_star();
  return online_construct(g, 0, std::vector<NodeId>{4, 5, 6});
}

SourceCodeAssignment clear_plus_sum_assignment() {
  // Rows A, B, A+B over GF(2^8); eval points only to keep them distinct.
  SourceCodeAssignment a;
  a.field = FieldSpec::gf8();
  a.k = 2;
  a.zones = {0, 1, 2};
  a.eval_points = {0, 1, 2};
  a.coding_vectors = {{1, 0}, {0, 1}, {1, 1}};
  return a;
}

}  // namespace

TEST_CASE("field axioms", "[gf]") {
  GaloisField gf(FieldSpec::gf8());
  SECTION("inverses round trip over the whole field") {
    for (std::uint32_t a = 1; a < 256; ++a) {
      REQUIRE(gf.mul(a, gf.inv(a)) == 1);
      REQUIRE(gf.pow(a, 255) == 1);
    }
    REQUIRE_THROWS_AS(gf.inv(0), std::domain_error);
  }
  SECTION("associativity and distributivity on sampled triples") {
    for (std::uint32_t a = 0; a < 256; a += 5) {
      for (std::uint32_t b = 1; b < 256; b += 7) {
        for (std::uint32_t c = 2; c < 256; c += 11) {
          REQUIRE(gf.mul(gf.mul(a, b), c) == gf.mul(a, gf.mul(b, c)));
          REQUIRE(gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c)));
          REQUIRE(gf.mul(a, b) == gf.mul(b, a));
        }
      }
    }
  }
  SECTION("degree sixteen") {
    GaloisField wide(FieldSpec::gf16());
    REQUIRE(wide.size() == 65536);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
      const std::uint32_t a = 1 + rng() % 65535;
      REQUIRE(wide.mul(a, wide.inv(a)) == 1);
      REQUIRE(wide.mul(a, 1) == a);
    }
  }
  SECTION("unsupported degree") {
    REQUIRE_THROWS_AS(GaloisField(FieldSpec{12}), std::invalid_argument);
  }
}

TEST_CASE("build_assignment") {
  SECTION("three zones with K=2 are pairwise independent") {
    auto result = three_zone_result();
    REQUIRE(result.zone_count == 3);
    auto assignment = build_assignment(result, FieldSpec::gf8());
    REQUIRE(assignment.k == 2);
    REQUIRE(assignment.eval_points == std::vector<std::uint32_t>{1, 2, 3});
    REQUIRE(assignment.coding_vectors ==
            std::vector<std::vector<std::uint32_t>>{{1, 1}, {1, 2}, {1, 3}});
    // Every 2x2 submatrix is invertible.
    for (ColorId a = 0; a < 3; ++a) {
      for (ColorId b = a + 1; b < 3; ++b) {
        const std::vector<ColorId> pair{a, b};
        REQUIRE(receiver_rank(assignment, pair) == 2);
      }
    }
  }

  SECTION("K=1 assigns the all-ones vector: clear symbols") {
    auto f = fixture_fig5();
    auto result = online_construct(f.graph, f.source, f.receivers);
    REQUIRE(throughput(result).group_k == 1);
    auto assignment = build_assignment(result, FieldSpec::gf8());
    for (const auto& row : assignment.coding_vectors) {
      REQUIRE(row == std::vector<std::uint32_t>{1});
    }
  }

  SECTION("zone count beyond q-1 does not fit") {
    OnlineResult fake;
    fake.receivers = {1};
    fake.per_receiver_paths = {{Path{0}}};
    fake.per_receiver_colors = {{0}};
    fake.zone_count = 300;
    REQUIRE_THROWS_AS(build_assignment(fake, FieldSpec::gf8()), field_too_small_error);
    REQUIRE_NOTHROW(build_assignment(fake, FieldSpec::gf16()));
  }

  SECTION("no feasible code at zero group flow") {
    OnlineResult fake;
    fake.receivers = {1};
    fake.per_receiver_paths = {{}};
    fake.per_receiver_colors = {{}};
    fake.zone_count = 0;
    REQUIRE_THROWS_AS(build_assignment(fake, FieldSpec::gf8()), no_feasible_code_error);
  }
}

TEST_CASE("receiver_rank") {
  auto result = three_zone_result();
  auto assignment = build_assignment(result, FieldSpec::gf8());
  SECTION("each receiver reaches full rank") {
    for (const auto& colors : result.per_receiver_colors) {
      REQUIRE(receiver_rank(assignment, colors) == assignment.k);
    }
  }
  SECTION("empty set") { REQUIRE(receiver_rank(assignment, {}) == 0); }
  SECTION("rank capped by column count") {
    const std::vector<ColorId> all{0, 1, 2};
    REQUIRE(receiver_rank(assignment, all) == 2);
  }
  SECTION("unknown zone") {
    const std::vector<ColorId> bad{9};
    REQUIRE_THROWS_AS(receiver_rank(assignment, bad), std::invalid_argument);
  }
}

TEST_CASE("any K rows of a tall Vandermonde block are independent") {
  OnlineResult fake;
  fake.receivers = {1};
  fake.per_receiver_paths = {{Path{0}, Path{1}, Path{2}}};
  fake.per_receiver_colors = {{0, 1, 2}};
  fake.zone_count = 9;
  auto assignment = build_assignment(fake, FieldSpec::gf8());
  REQUIRE(assignment.k == 3);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ColorId> pick;
    while (pick.size() < 3) {
      ColorId z = rng() % 9;
      if (std::find(pick.begin(), pick.end(), z) == pick.end()) pick.push_back(z);
    }
    REQUIRE(receiver_rank(assignment, pick) == 3);
  }
}

TEST_CASE("simulate_round and decode reproduce the clear/sum table") {
  auto g = testsupport::three_zone_star();
  auto result = online_construct(g, 0, std::vector<NodeId>{4, 5, 6});
  auto assignment = clear_plus_sum_assignment();

  const std::uint32_t a = 0x41, b = 0x42;
  SymbolBlock x{{a, b}};
  auto observations = simulate_round(g, result, assignment, x);
  REQUIRE(observations.size() == 3);

  auto symbols_of = [&](const ReceiverObservation& obs) {
    std::vector<std::uint32_t> ys;
    for (auto& [zone, y] : obs.received) ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    return ys;
  };
  std::vector<std::uint32_t> ab{a, b};
  std::vector<std::uint32_t> a_sum{a, static_cast<std::uint32_t>(a ^ b)};
  std::vector<std::uint32_t> b_sum{b, static_cast<std::uint32_t>(a ^ b)};
  std::sort(ab.begin(), ab.end());
  std::sort(a_sum.begin(), a_sum.end());
  std::sort(b_sum.begin(), b_sum.end());
  REQUIRE(symbols_of(observations[0]) == ab);     // zones {0,1}: A and B
  REQUIRE(symbols_of(observations[1]) == a_sum);  // zones {2,0}: A+B and A
  REQUIRE(symbols_of(observations[2]) == b_sum);  // zones {1,2}: B and A+B

  for (const auto& obs : observations) {
    REQUIRE(decode(assignment, obs).x == x.x);
  }
}

TEST_CASE("simulate_round details") {
  SECTION("K=1 delivers the clear symbol everywhere") {
    auto f = fixture_fig5();
    auto result = online_construct(f.graph, f.source, f.receivers);
    auto assignment = build_assignment(result, FieldSpec::gf8());
    SymbolBlock x{{0x5A}};
    auto observations = simulate_round(f.graph, result, assignment, x);
    for (const auto& obs : observations) {
      for (auto& [zone, y] : obs.received) REQUIRE(y == 0x5A);
      REQUIRE(decode(assignment, obs).x == x.x);
    }
  }
  SECTION("zero block stays zero") {
    auto result = three_zone_result();
    auto g = testsupport::three_zone_star();
    auto assignment = build_assignment(result, FieldSpec::gf8());
    SymbolBlock x{{0, 0}};
    for (const auto& obs : simulate_round(g, result, assignment, x)) {
      for (auto& [zone, y] : obs.received) REQUIRE(y == 0);
      REQUIRE(decode(assignment, obs).x == x.x);
    }
  }
  SECTION("a path spanning two zones is an internal error") {
    auto g = testsupport::three_zone_star();
    auto result = online_construct(g, 0, std::vector<NodeId>{4, 5, 6});
    auto assignment = build_assignment(result, FieldSpec::gf8());
    // Claim receiver 4's first path is zone 1 while its edges are zone 0.
    result.per_receiver_colors[0][0] = 1;
    SymbolBlock x{{1, 2}};
    REQUIRE_THROWS_AS(simulate_round(g, result, assignment, x), internal_error);
  }
}

TEST_CASE("decode") {
  SECTION("A and A+B recover both symbols") {
    SourceCodeAssignment assignment;
    assignment.field = FieldSpec::gf8();
    assignment.k = 2;
    assignment.zones = {0, 1};
    assignment.eval_points = {0, 1};
    assignment.coding_vectors = {{1, 0}, {1, 1}};
    ReceiverObservation obs;
    obs.receiver = 6;
    const std::uint32_t a = 0x9C, b = 0x37;
    obs.received = {{0, a}, {1, a ^ b}};
    auto decoded = decode(assignment, obs);
    REQUIRE(decoded.x == std::vector<std::uint32_t>{a, b});
  }
  SECTION("K=1 with the unit vector is the identity") {
    SourceCodeAssignment assignment;
    assignment.field = FieldSpec::gf8();
    assignment.k = 1;
    assignment.zones = {0};
    assignment.eval_points = {1};
    assignment.coding_vectors = {{1}};
    ReceiverObservation obs;
    obs.received = {{0, 0x7E}};
    REQUIRE(decode(assignment, obs).x == std::vector<std::uint32_t>{0x7E});
  }
  SECTION("rank-deficient observation names the receiver") {
    SourceCodeAssignment assignment;
    assignment.field = FieldSpec::gf8();
    assignment.k = 2;
    assignment.zones = {0, 1};
    assignment.eval_points = {0, 1};
    assignment.coding_vectors = {{1, 1}, {1, 1}};
    ReceiverObservation obs;
    obs.receiver = 42;
    obs.received = {{0, 5}, {1, 5}};
    REQUIRE_THROWS_WITH(decode(assignment, obs),
                        Catch::Matchers::ContainsSubstring("42"));
  }
  SECTION("too few observations") {
    auto assignment = clear_plus_sum_assignment();
    ReceiverObservation obs;
    obs.received = {{0, 1}};
    REQUIRE_THROWS_AS(decode(assignment, obs), undecodable_error);
  }
}

TEST_CASE("encode/decode round trip over random constructions", "[roundtrip]") {
  std::mt19937_64 rng(808);
  int decodable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t n = 6 + rng() % 9;
    auto g = testsupport::random_digraph(rng, n, 0.4);
    std::vector<NodeId> receivers;
    for (NodeId v = 1; v < n && receivers.size() < 3; ++v) {
      if (rng() % 3 == 0) receivers.push_back(v);
    }
    if (receivers.empty()) receivers.push_back(1);
    auto result = online_construct(g, 0, receivers);
    if (throughput(result).group_k == 0) continue;
    ++decodable;
    auto assignment = build_assignment(result, FieldSpec::gf8());
    SymbolBlock x;
    for (std::uint32_t j = 0; j < assignment.k; ++j) {
      x.x.push_back(static_cast<std::uint32_t>(rng() & 0xFF));
    }
    for (const auto& obs : simulate_round(g, result, assignment, x)) {
      REQUIRE(decode(assignment, obs).x == x.x);
    }
  }
  REQUIRE(decodable > 100);  // the ensemble exercises the property for real
}
