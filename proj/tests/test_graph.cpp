#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "speakerattr/common.hpp"
#include "speakerattr/community.hpp"
#include "speakerattr/graph.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace speakerattr;

namespace {

Corpus mention_corpus() {
  Corpus c;
  c.author_id = "author";
  // partner "bo": mentions cy twice in one message (counts once), mentions itself (skipped).
  c.conversations.push_back(fixtures::conversation("bo", {"cy and cy", "say hi to bo and cy", "dee?"}, {1, 2, 3}));
  c.conversations.push_back(fixtures::conversation("cy", {"bo", "me"}, {4, 5}));
  c.conversations.push_back(fixtures::conversation("dee", {"hello"}, {6}));
  return c;
}

AliasTable mention_aliases() {
  AliasTable t;
  t.aliases["author"] = {"me"};
  t.aliases["bo"] = {"bo"};
  t.aliases["cy"] = {"cy"};
  t.aliases["dee"] = {"dee"};
  return t;
}

}  // namespace

TEST(ShortestPaths, MatchesFloydWarshallOnRandomGraphs) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    WeightedGraph g = fixtures::random_graph(rng);
    DistanceMatrix d = shortest_paths(g);
    auto fw = oracles::floyd_warshall(g);
    double max_finite = 0.0;
    for (const auto& row : fw) {
      for (double x : row) {
        if (std::isfinite(x)) max_finite = std::max(max_finite, x);
      }
    }
    ASSERT_EQ(d.sentinel, max_finite + 1.0) << "trial " << trial;
    for (std::size_t i = 0; i < g.node_count; ++i) {
      for (std::size_t j = 0; j < g.node_count; ++j) {
        if (std::isfinite(fw[i][j])) {
          ASSERT_TRUE(d.is_reachable(i, j));
          ASSERT_EQ(d.at(i, j), fw[i][j]) << "trial " << trial << " " << i << "->" << j;
        } else {
          ASSERT_FALSE(d.is_reachable(i, j));
          ASSERT_EQ(d.at(i, j), d.sentinel);
        }
      }
    }
    ASSERT_EQ(d, shortest_paths_serial(g));
  }
}

TEST(ShortestPaths, RejectsNegativeWeights) {
  WeightedGraph g;
  g.node_count = 2;
  g.out = {{{1, -0.5}}, {}};
  EXPECT_THROW(shortest_paths(g), Error);
}

TEST(MentionGraph, CountsOncePerMessageSkippingBothParticipants) {
  Corpus c = mention_corpus();
  MentionGraph g = build_mention_graph(c, mention_aliases());
  ASSERT_EQ(g.nodes, (std::vector<std::string>{"author", "bo", "cy", "dee"}));
  // bo's messages: "cy and cy" (bo->cy), "dee?" (bo->dee); author's "say hi to bo and cy" -> author->cy only.
  EXPECT_EQ(g.count(1, 2), 1u);
  EXPECT_EQ(g.count(1, 3), 1u);
  EXPECT_EQ(g.count(0, 2), 1u);
  EXPECT_EQ(g.count(0, 1), 0u);
  // cy's conversation: "bo" from cy -> bo; author's "me" names the author itself.
  EXPECT_EQ(g.count(2, 1), 1u);
  EXPECT_EQ(g.count(0, 0), 0u);
  EXPECT_EQ(g.counts.size(), 4u);
  EXPECT_EQ(g.w_max, 1u);
  EXPECT_EQ(g.w_min, 1u);
  EXPECT_TRUE(g.touches_edge(3));

  // Only cy's conversation: bo is still a node and keeps its mention by cy.
  std::vector<const Conversation*> only = {c.find("cy")};
  MentionGraph part = build_mention_graph(c, only, mention_aliases());
  EXPECT_EQ(part.counts.size(), 1u);
  EXPECT_FALSE(part.touches_edge(3));
}

TEST(MentionGraph, WeightModes) {
  EXPECT_DOUBLE_EQ(mention_weight(10, 2, 10, WeightMode::inverted), 0.0);
  EXPECT_DOUBLE_EQ(mention_weight(2, 2, 10, WeightMode::inverted), 1.0);
  EXPECT_DOUBLE_EQ(mention_weight(4, 2, 10, WeightMode::inverted), 0.75);
  EXPECT_DOUBLE_EQ(mention_weight(4, 2, 10, WeightMode::paper_formula), 0.25);
  EXPECT_DOUBLE_EQ(mention_weight(5, 5, 5, WeightMode::inverted), 1.0);
  EXPECT_DOUBLE_EQ(mention_weight(5, 5, 5, WeightMode::paper_formula), 1.0);
}

TEST(MentionGraph, ReversedOrientationTransposesDistances) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    WeightedGraph g = fixtures::random_graph(rng);
    DistanceMatrix d = shortest_paths(g);
    DistanceMatrix r = shortest_paths(reversed(g));
    for (std::size_t i = 0; i < g.node_count; ++i) {
      for (std::size_t j = 0; j < g.node_count; ++j) ASSERT_EQ(r.at(i, j), d.at(j, i));
    }
  }
  EXPECT_EQ(parse_graph_orientation("Incoming"), GraphOrientation::incoming);
  EXPECT_THROW(parse_graph_orientation("sideways"), Error);
}

TEST(Louvain, TwoTrianglesMatchExhaustiveOptimum) {
  UndirectedGraph g = fixtures::two_triangles();
  auto best = oracles::exhaustive_modularity(g);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Partition p = louvain(g, seed);
    EXPECT_TRUE(fixtures::same_partition(p.community, best.community)) << "seed " << seed;
    EXPECT_NEAR(p.modularity, best.modularity, 1e-12);
    EXPECT_NEAR(p.modularity, 0.5, 1e-12);
    EXPECT_EQ(p.community_count, 2u);
  }
}

TEST(Louvain, CompleteGraphStaysWhole) {
  UndirectedGraph g = fixtures::k4();
  auto best = oracles::exhaustive_modularity(g);
  EXPECT_NEAR(best.modularity, 0.0, 1e-12);
  Partition p = louvain(g, 3);
  EXPECT_NEAR(p.modularity, best.modularity, 1e-12);
  EXPECT_EQ(p.community_count, 1u);
}

TEST(Louvain, SameSeedSameResultAndEdgelessThrows) {
  Rng rng(12);
  std::vector<std::tuple<std::size_t, std::size_t, double>> e;
  for (int i = 0; i < 60; ++i) e.emplace_back(rng.below(25), rng.below(25), 1.0 + static_cast<double>(rng.below(4)));
  UndirectedGraph g = UndirectedGraph::from_edges(25, e);
  Partition a = louvain(g, 9), b = louvain(g, 9);
  EXPECT_EQ(a.community, b.community);
  EXPECT_NEAR(a.modularity, modularity(g, a.community), 1e-12);
  UndirectedGraph empty = UndirectedGraph::from_edges(3, {});
  EXPECT_THROW(louvain(empty, 0), Error);
}

TEST(Modularity, HandComputedValue) {
  // Path 0-1-2 with unit weights, split {0,1} {2}: 2m = 4, k = (1,2,1).
  std::vector<std::tuple<std::size_t, std::size_t, double>> e = {{0, 1, 1}, {1, 2, 1}};
  UndirectedGraph g = UndirectedGraph::from_edges(3, e);
  std::vector<std::size_t> c = {0, 0, 1};
  // within {0,1}: A = 2 (both directions) minus (1+2)^2/4; within {2}: 0 - 1/4.
  const double q = ((2.0 - 9.0 / 4.0) + (0.0 - 1.0 / 4.0)) / 4.0;
  EXPECT_NEAR(modularity(g, c), q, 1e-15);
}

TEST(Display, FiltersEdgesAndKeepsAuthor) {
  Corpus c = mention_corpus();
  MentionGraph g = build_mention_graph(c, mention_aliases());
  Partition p = louvain(symmetrize(g), 1);
  GraphExport view = display_subgraph(g, p, c, nullptr, WeightMode::inverted, 2, 1);
  ASSERT_EQ(view.nodes.size(), 3u);
  EXPECT_EQ(view.nodes[0].id, "author");
  for (const auto& e : view.edges) {
    EXPECT_GE(e.count, 1u);
    EXPECT_NE(e.target, "dee");
  }
  std::ostringstream out;
  write_graph_export(out, view);
  EXPECT_NE(out.str().find("\nnode\tauthor\t"), std::string::npos);
}
