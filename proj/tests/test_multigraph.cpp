#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <random>

#include "support.hpp"
#include "thc/multigraph.hpp"

using namespace thc;
using thc::test::vid;

namespace {

// Random graph that may be disconnected, as an adjacency matrix plus graph.
struct Sample {
  Multigraph g;
  std::vector<std::vector<bool>> adj;
  std::size_t n = 0;
};

Sample sample(std::mt19937_64& gen, std::size_t n, double p, std::size_t boundary) {
  Sample s;
  s.n = n;
  s.adj.assign(n, std::vector<bool>(n, false));
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex(vid("s", i));
  std::bernoulli_distribution edge(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (edge(gen)) {
        s.adj[i][j] = s.adj[j][i] = true;
        b.add_edge(vid("s", i), vid("s", j));
      }
  for (std::size_t i = 0; i < boundary; ++i) b.add_boundary(vid("s", gen() % n));
  s.g = b.build();
  return s;
}

// Shortest simple path length by exhaustive enumeration of all simple paths.
std::optional<std::size_t> brute_distance(const Sample& s, std::size_t from, std::size_t to) {
  std::optional<std::size_t> best;
  std::vector<bool> seen(s.n, false);
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t at, std::size_t hops) {
    if (at == to) {
      if (!best || hops < *best) best = hops;
      return;
    }
    seen[at] = true;
    for (std::size_t k = 0; k < s.n; ++k)
      if (s.adj[at][k] && !seen[k]) walk(k, hops + 1);
    seen[at] = false;
  };
  walk(from, 0);
  return best;
}

std::size_t index_of(const VertexId& id) { return std::stoul(id.substr(id.rfind('-') + 1)); }

}  // namespace

TEST_CASE("builder collects every violation") {
  GraphBuilder b;
  b.add_vertex("a").add_vertex("a").add_vertex("b");
  b.add_edge("a", "b").add_edge("b", "a").add_edge("a", "ghost");
  b.add_boundary("nowhere");
  try {
    b.build();
    FAIL("expected InputError");
  } catch (const InputError& e) {
    std::string what = e.what();
    CHECK(what.find("duplicate vertex a") != std::string::npos);
    CHECK(what.find("ghost") != std::string::npos);
    CHECK(what.find("nowhere") != std::string::npos);
  }
  CHECK_THROWS_AS(GraphBuilder().add_vertex("a").add_edge("a", "a").build(), InputError);
  CHECK_THROWS_AS(GraphBuilder().add_vertex("a").add_loop("a", {}, 1).add_loop("a", {}, 1).build(), InputError);
}

TEST_CASE("loops get counters and labels are normalised") {
  auto g = GraphBuilder()
               .add_vertex("a", {"z", "b", "z"})
               .add_vertex("b")
               .add_edge("b", "a")
               .add_loop("a")
               .add_loop("a")
               .add_loop("a", {}, 3)
               .build();
  CHECK(g.labels(ElementKey::vertex("a")) == LabelSet{"b", "z"});
  CHECK(g.loop_count("a") == 3);
  CHECK(g.has_element(ElementKey::edge("a", "b")));
  CHECK(g.has_element(ElementKey::edge("a", "a", 1)));
  CHECK(g.has_element(ElementKey::edge("a", "a", 2)));
  CHECK(g.has_element(ElementKey::edge("a", "a", 3)));
  CHECK_THROWS_AS(GraphBuilder().add_vertex("a").add_loop("a", {}, 2).build(), InputError);
  CHECK(g.edge_count() == 4);
  CHECK(g.dimension() == 6);
  auto els = g.elements();
  CHECK(els.front() == ElementKey::vertex("a"));
  CHECK(std::is_sorted(els.begin() + 2, els.end()));
  CHECK(g.neighbours("a") == std::vector<VertexId>{"b"});
}

TEST_CASE("shortest path matches exhaustive enumeration") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 120; ++trial) {
    auto n = 2 + gen() % 7;
    auto s = sample(gen, n, 0.35, 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          CHECK_THROWS_AS(shortest_path(s.g, vid("s", i), vid("s", j)), StructuralError);
          continue;
        }
        auto want = brute_distance(s, i, j);
        auto got = shortest_path(s.g, vid("s", i), vid("s", j));
        REQUIRE(want.has_value() == got.has_value());
        if (!got) continue;
        CHECK(got->real_length == *want);
        CHECK(got->padded_length() == *want);
        validate_path(s.g, *got);
        auto d = hop_distances(s.g, vid("s", i));
        CHECK(d.at(vid("s", j)) == *want);
      }
  }
  Multigraph g = GraphBuilder().add_vertex("a").build();
  CHECK_THROWS_AS(shortest_path(g, "a", "b"), InputError);
}

TEST_CASE("cheapest path honours edge costs") {
  // a-b-d is two hops but expensive; a-c-e-d is three cheap hops.
  auto g = GraphBuilder()
               .add_vertex("a").add_vertex("b").add_vertex("c").add_vertex("d").add_vertex("e")
               .add_edge("a", "b").add_edge("b", "d").add_edge("a", "c").add_edge("c", "e").add_edge("e", "d")
               .build();
  auto cost = [](const VertexId& x, const VertexId& y) -> std::uint64_t {
    return (x == "b" || y == "b") ? 10 : 1;
  };
  auto p = cheapest_path(g, "a", "d", cost);
  REQUIRE(p);
  CHECK(p->real_length == 3);
  CHECK(shortest_path(g, "a", "d")->real_length == 2);
}

TEST_CASE("padding target examples") {
  auto star = GraphBuilder()
                  .add_vertex("c").add_vertex("x").add_vertex("y").add_vertex("z")
                  .add_edge("c", "x").add_edge("c", "y").add_edge("c", "z")
                  .add_boundary("c")
                  .build();
  CHECK(padding_target(star) == 1);
  auto line = GraphBuilder()
                  .add_vertex("A").add_vertex("B").add_vertex("C")
                  .add_edge("A", "B").add_edge("B", "C")
                  .add_boundary("C")
                  .build();
  CHECK(padding_target(line) == 2);
  CHECK(padding_target(GraphBuilder().add_vertex("solo").add_boundary("solo").build()) == 0);
  CHECK_THROWS_AS(padding_target(GraphBuilder().add_vertex("a").build()), StructuralError);
  auto split = GraphBuilder().add_vertex("a").add_vertex("b").add_boundary("a").build();
  CHECK_THROWS_AS(padding_target(split), StructuralError);
}

TEST_CASE("padding target and augment against the enumeration oracle") {
  std::mt19937_64 gen(12);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto n = 1 + gen() % 8;
    auto s = sample(gen, n, 0.45, 1 + gen() % 2);
    std::optional<std::size_t> want = 0;
    for (const auto& b : s.g.boundary())
      for (std::size_t v = 0; v < n && want; ++v) {
        auto d = v == index_of(b) ? std::optional<std::size_t>(0) : brute_distance(s, v, index_of(b));
        if (!d)
          want.reset();
        else
          want = std::max(*want, *d);
      }
    if (!want) {
      CHECK_THROWS_AS(padding_target(s.g), StructuralError);
      continue;
    }
    ++checked;
    CHECK(padding_target(s.g) == *want);
    auto loops = 1 + gen() % 4;
    auto aug = augment(s.g, loops);
    CHECK(aug.edge_count() == s.g.edge_count() + loops * s.g.boundary().size());
    CHECK(aug.vertex_count() == s.g.vertex_count());
    CHECK(padding_target(aug) == *want);
    for (const auto& b : s.g.boundary()) {
      CHECK(aug.loop_count(b) == loops);
      CHECK(hop_distances(aug, b) == hop_distances(s.g, b));
    }
  }
  CHECK(checked > 50);
  CHECK_THROWS_AS(augment(GraphBuilder().add_vertex("a").add_boundary("a").build(), 0), InputError);
}

TEST_CASE("padding appends distinct loops at the chosen end") {
  auto line = GraphBuilder()
                  .add_vertex("A").add_vertex("B").add_vertex("C")
                  .add_edge("A", "B").add_edge("B", "C")
                  .add_boundary("C").add_boundary("A")
                  .build();
  auto aug = augment(line, 4);
  auto p = *shortest_path(aug, "A", "C");
  auto padded = pad_path(p, aug, 4);
  CHECK(padded.padded_length() == 4);
  CHECK(padded.real_length == 2);
  CHECK(padded.steps[2] == PathStep{"C", "C", 1});
  CHECK(padded.steps[3] == PathStep{"C", "C", 2});
  validate_path(aug, padded);

  auto front = pad_path(p, aug, 4, PadEnd::source);
  CHECK(front.padded_at_source);
  CHECK(front.steps[0].from == "A");
  CHECK(front.steps[0].to == "A");
  CHECK(front.steps[2] == PathStep{"A", "B", 0});
  validate_path(aug, front);

  CHECK_THROWS_AS(pad_path(padded, aug, 4), InputError);
  CHECK_THROWS_AS(pad_path(p, aug, 1), InputError);
  CHECK_THROWS_AS(pad_path(p, aug, 7), StructuralError);
  auto b_to_a = *shortest_path(aug, "C", "B");
  CHECK_THROWS_AS(pad_path(b_to_a, aug, 3), StructuralError);  // B has no loops

  auto broken = padded;
  std::swap(broken.steps[1], broken.steps[2]);
  CHECK_THROWS_AS(validate_path(aug, broken), StructuralError);
  auto reused = padded;
  reused.steps[3] = reused.steps[2];
  CHECK_THROWS_AS(validate_path(aug, reused), StructuralError);
}

TEST_CASE("padded paths are valid on random graphs up to 20 vertices") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 60; ++trial) {
    auto n = 2 + gen() % 19;
    auto g = test::random_graph(gen, n, gen() % 6, 1 + gen() % 3, "r");
    auto ell = padding_target(g);
    if (ell == 0) continue;
    auto aug = augment(g, ell);
    for (const auto& b : g.boundary()) {
      for (const auto& [v, _] : g.vertices()) {
        if (v == b) continue;
        auto p = shortest_path(aug, v, b);
        REQUIRE(p);
        CHECK(p->real_length <= ell);
        auto padded = pad_path(*p, aug, ell);
        CHECK(padded.padded_length() == ell);
        validate_path(aug, padded);
        std::set<ElementKey> keys;
        for (const auto& s : padded.steps) keys.insert(s.key());
        CHECK(keys.size() == ell);
        auto reverse = pad_path(*shortest_path(aug, b, v), aug, ell, PadEnd::source);
        validate_path(aug, reverse);
        CHECK(reverse.source == b);
      }
    }
  }
}

TEST_CASE("json round trip and schema errors") {
  auto g = GraphBuilder()
               .add_vertex("x", {"l1"}).add_vertex("y")
               .add_edge("x", "y", {"fiber"})
               .add_loop("y", {"q"}, 1)
               .add_loop("y", {"q"}, 2)
               .add_boundary("y")
               .build();
  auto text = graph_to_json(g);
  auto back = graph_from_json(text);
  CHECK(graph_to_json(back) == text);
  CHECK(graph_digest_hex(back) == graph_digest_hex(g));
  CHECK(back.has_element(ElementKey::edge("y", "y", 2)));

  CHECK_THROWS_AS(graph_from_json("{"), InputError);
  CHECK_THROWS_AS(graph_from_json("[]"), InputError);
  std::string bad =
      "{\n"
      "  \"vertices\": [{\"id\": \"a\"}],\n"
      "  \"edges\": [],\n"
      "  \"loops\": [{\"v\": \"a\", \"counter\": 0}],\n"
      "  \"colour\": 1\n"
      "}\n";
  try {
    graph_from_json(bad);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    std::string what = e.what();
    CHECK(what.find("line 4") != std::string::npos);
    CHECK(what.find("counter") != std::string::npos);
    CHECK(what.find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(graph_from_json(R"({"vertices":[{"id":"a"}],"edges":[{"u":"a","v":"a"}]})"), InputError);
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"), IoError);
}
