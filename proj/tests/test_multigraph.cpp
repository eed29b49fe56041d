#include "jacloc/multigraph.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "support/builders.hpp"

using namespace jacloc;
using namespace testsupport;

TEST_CASE("b1 of small graphs") {
  CHECK(loop_graph().b1() == 1);
  for (int n = 1; n <= 6; ++n) CHECK(banana(n).b1() == n - 1);
  CHECK(path(2).b1() == 0);
  CHECK(path(5).b1() == 0);
  CHECK(triangle().b1() == 1);
  CHECK(edgeless(3).b1() == 0);
  // disconnected: two loops on separate vertices
  MultiGraph two = MultiGraph({0, 1}, {{0, 0, 0}, {1, 1, 1}});
  CHECK(two.component_count() == 2);
  CHECK(two.b1() == 2);
}

TEST_CASE("graph validation") {
  CHECK_THROWS_AS(MultiGraph({0, 0}, {}), InvalidDataError);
  CHECK_THROWS_AS(MultiGraph({0}, {{0, 0, 1}}), InvalidDataError);
  CHECK_THROWS_AS(MultiGraph({0, 1}, {{0, 0, 1}, {0, 1, 0}}), InvalidDataError);
}

TEST_CASE("separating edges") {
  SECTION("every tree edge is a bridge") {
    CHECK(path(3).separating_edges() == std::set<int>{0, 1});
    CHECK(path(6).separating_edges().size() == 5u);
  }
  SECTION("parallel edges are never bridges") {
    CHECK(banana(2).separating_edges().empty());
    CHECK(banana(5).separating_edges().empty());
  }
  SECTION("loops are never bridges") {
    CHECK(loop_graph().separating_edges().empty());
  }
  SECTION("mixed graph") {
    // banana(2) with a pendant vertex: only the pendant edge separates
    MultiGraph g = make_graph(3, {{0, 1}, {0, 1}, {1, 2}});
    CHECK(g.separating_edges() == std::set<int>{2});
  }
}

TEST_CASE("edge contraction") {
  SECTION("keeping every edge is the identity") {
    MultiGraph g = loop_graph();
    auto res = g.contract_edges(g.edge_ids());
    CHECK(res.graph == g);
    auto all = triangle();
    CHECK(all.contract_edges(all.edge_ids()).graph == all);
  }
  SECTION("keeping nothing collapses to a point") {
    auto res = path(3).contract_edges({});
    CHECK(res.graph.num_vertices() == 1);
    CHECK(res.graph.num_edges() == 0);
    CHECK(res.vertex_map.size() == 3u);
    for (auto [v, w] : res.vertex_map) CHECK(w == 0);
  }
  SECTION("triangle with one kept edge becomes a loop") {
    auto res = triangle().contract_edges({0});
    CHECK(res.graph.num_vertices() == 1);
    REQUIRE(res.graph.num_edges() == 1);
    CHECK(res.graph.edges()[0].is_loop());
    CHECK(res.graph.edges()[0].id == 0);
  }
  SECTION("vertex map is the contraction surjection") {
    auto res = triangle().contract_edges({0});
    std::set<int> images;
    for (auto [v, w] : res.vertex_map) {
      CHECK(res.graph.has_vertex(w));
      images.insert(w);
    }
    CHECK(static_cast<int>(images.size()) == res.graph.num_vertices());
  }
  SECTION("b1 is preserved by contracting a non-loop edge") {
    auto& gen = rng();
    for (int trial = 0; trial < 40; ++trial) {
      MultiGraph g = random_connected_multigraph(gen, 5, 4);
      for (const Edge& e : g.edges()) {
        if (e.is_loop()) continue;
        std::set<int> keep = g.edge_ids();
        keep.erase(e.id);
        CHECK(g.contract_edges(keep).graph.b1() == g.b1());
      }
    }
  }
}

TEST_CASE("totally cyclic orientations of named graphs") {
  CHECK(loop_graph().totally_cyclic_orientations().size() == 2u);
  CHECK(banana(3).totally_cyclic_orientations().size() == 6u);
  CHECK(path(3).totally_cyclic_orientations().empty());
  SECTION("edgeless graph has exactly the empty orientation") {
    auto os = edgeless(1).totally_cyclic_orientations();
    REQUIRE(os.size() == 1u);
    CHECK(os[0].assignment.empty());
  }
}

TEST_CASE("totally cyclic orientation counts on banana graphs are 2^n - 2") {
  for (int n = 2; n <= 8; ++n) {
    auto os = banana(n).totally_cyclic_orientations();
    CHECK(os.size() == (1u << n) - 2);
  }
}

TEST_CASE("every returned orientation is totally cyclic by direct verification") {
  auto& gen = rng();
  for (int trial = 0; trial < 25; ++trial) {
    MultiGraph g = random_connected_multigraph(gen, 4, 3);
    if (g.num_edges() > 10) continue;
    for (const Orientation& o : g.totally_cyclic_orientations())
      CHECK(orientation_totally_cyclic_oracle(g, o));
  }
}

TEST_CASE("orientations exist exactly when there is no bridge") {
  auto& gen = rng();
  for (int trial = 0; trial < 30; ++trial) {
    MultiGraph g = random_connected_multigraph(gen, 4, 4);
    if (g.num_edges() > 10) continue;
    const bool has = !g.totally_cyclic_orientations().empty();
    CHECK(has == g.separating_edges().empty());
  }
}

TEST_CASE("orientation output is deterministic and lexicographic") {
  auto os = banana(2).totally_cyclic_orientations();
  REQUIRE(os.size() == 2u);
  CHECK(os[0].assignment.at(0) == Direction::Forward);
  CHECK(os[0].assignment.at(1) == Direction::Backward);
  CHECK(os[1].assignment.at(0) == Direction::Backward);
  CHECK(os[1].assignment.at(1) == Direction::Forward);
}

TEST_CASE("oriented circuits of named graphs") {
  SECTION("a loop has exactly two oriented circuits") {
    auto cs = loop_graph().oriented_circuits();
    REQUIRE(cs.size() == 2u);
    CHECK(cs[0].edges.size() == 1u);
  }
  SECTION("banana graphs have 2 * C(n,2)") {
    for (int n = 2; n <= 6; ++n) {
      auto cs = banana(n).oriented_circuits();
      CHECK(cs.size() == static_cast<std::size_t>(n * (n - 1)));
    }
  }
  SECTION("trees are acyclic") {
    CHECK(path(4).oriented_circuits().empty());
    CHECK(edgeless(2).oriented_circuits().empty());
  }
  SECTION("triangle") {
    CHECK(triangle().oriented_circuits().size() == 2u);
  }
}

TEST_CASE("oriented circuits are valid simple cycles") {
  auto& gen = rng();
  for (int trial = 0; trial < 25; ++trial) {
    MultiGraph g = random_connected_multigraph(gen, 5, 3);
    if (g.num_edges() > 10) continue;
    for (const OrientedCircuit& c : g.oriented_circuits())
      CHECK(circuit_is_valid(g, c));
  }
}

TEST_CASE("circuit reversal is a fixed-point-free involution on the output") {
  auto& gen = rng();
  for (int trial = 0; trial < 25; ++trial) {
    MultiGraph g = random_connected_multigraph(gen, 5, 3);
    if (g.num_edges() > 10) continue;
    auto cs = g.oriented_circuits();
    std::set<OrientedCircuit> all(cs.begin(), cs.end());
    CHECK(all.size() == cs.size());
    for (const OrientedCircuit& c : cs) {
      OrientedCircuit r = c.reversed();
      CHECK(!(r == c));
      CHECK(all.count(r) == 1u);
      CHECK(r.reversed() == c);
    }
  }
}

TEST_CASE("circuit to circulation") {
  SECTION("loop traversed forward") {
    MultiGraph g = loop_graph();
    auto cs = g.oriented_circuits();
    REQUIRE(cs.size() == 2u);
    Circulation fwd = circuit_to_circulation(cs[0], g);
    CHECK(fwd.flow(0) == 1);
    Circulation bwd = circuit_to_circulation(cs[1], g);
    CHECK(bwd.flow(0) == -1);
  }
  SECTION("banana circuit has opposite signs") {
    MultiGraph g = banana(2);
    auto cs = g.oriented_circuits();
    REQUIRE(cs.size() == 2u);
    // canonical first circuit: edge 0 forward, edge 1 backward
    Circulation c = circuit_to_circulation(cs[0], g);
    CHECK(c.flow(0) == 1);
    CHECK(c.flow(1) == -1);
  }
  SECTION("reversal negates the flow") {
    MultiGraph g = triangle();
    for (const OrientedCircuit& c : g.oriented_circuits()) {
      Circulation a = circuit_to_circulation(c, g);
      Circulation b = circuit_to_circulation(c.reversed(), g);
      for (const auto& [id, f] : a.entries()) CHECK(b.flow(id) == -f);
    }
  }
  SECTION("all circuit circulations have zero boundary") {
    auto& gen = rng();
    for (int trial = 0; trial < 20; ++trial) {
      MultiGraph g = random_connected_multigraph(gen, 5, 3);
      if (g.num_edges() > 10) continue;
      for (const OrientedCircuit& c : g.oriented_circuits())
        CHECK_NOTHROW(circuit_to_circulation(c, g));  // ctor validates boundary
    }
  }
}

TEST_CASE("circulation validation rejects nonzero boundary") {
  MultiGraph g = banana(2);
  CHECK_THROWS_AS(Circulation(g, {{0, 1}, {1, 1}}), InvalidDataError);
  CHECK_NOTHROW(Circulation(g, {{0, 1}, {1, -1}}));
  SECTION("circulations never cross bridges") {
    MultiGraph h = path(3);
    CHECK_THROWS_AS(Circulation(h, {{0, 1}}), InvalidDataError);
  }
}

TEST_CASE("enumeration guards reject oversized graphs") {
  MultiGraph big = banana(17);
  CHECK_THROWS_AS(big.totally_cyclic_orientations(), ScaleLimitError);
  CHECK_THROWS_AS(big.oriented_circuits(), ScaleLimitError);
}
