#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "symanzik/corpus.hpp"
#include "symanzik/multigraph.hpp"

using namespace symanzik;

namespace {
EdgeSubset subset(int m, std::initializer_list<int> ids) {
  EdgeSubset s(m);
  for (int e : ids) s = s.with(e);
  return s;
}
}  // namespace

TEST_CASE("edge subset algebra and ordering") {
  EdgeSubset a = subset(4, {0, 3});
  EdgeSubset b = subset(4, {1, 2});
  REQUIRE(a.unite(b) == subset(4, {0, 1, 2, 3}));
  REQUIRE(a.intersect(b).empty());
  REQUIRE(a.complement() == b);
  REQUIRE(a.minus(subset(4, {3})) == subset(4, {0}));
  // ascending-sequence lexicographic order: {0,3} < {1,2}
  REQUIRE(a < b);
  REQUIRE(subset(4, {0}) < subset(4, {0, 1}));
  REQUIRE_THROWS_AS(a.unite(EdgeSubset(3)), std::invalid_argument);
  REQUIRE_THROWS_AS(subset(4, {0}).with(7), std::invalid_argument);
}

TEST_CASE("genus") {
  REQUIRE(genus(graphs::k2()) == 0);
  REQUIRE(genus(graphs::cycle(3)) == 1);
  REQUIRE(genus(graphs::banana(3)) == 2);
  Multigraph disconnected(3, {{0, 1}});
  REQUIRE_THROWS_WITH(genus(disconnected), "graph not connected");
  // self-loops count in m
  Multigraph loop(1, {{0, 0}, {0, 0}});
  REQUIRE(genus(loop) == 2);
}

TEST_CASE("spanning trees: pinned examples") {
  REQUIRE(spanning_trees(graphs::k2()) == std::vector<EdgeSubset>{subset(1, {0})});
  auto c3 = spanning_trees(graphs::cycle(3));
  REQUIRE(c3 == std::vector<EdgeSubset>{subset(3, {0, 1}), subset(3, {0, 2}), subset(3, {1, 2})});
  auto banana = spanning_trees(graphs::banana(3));
  REQUIRE(banana == std::vector<EdgeSubset>{subset(3, {0}), subset(3, {1}), subset(3, {2})});
  REQUIRE(spanning_trees(Multigraph(3, {{0, 1}})).empty());  // disconnected
}

TEST_CASE("spanning 2-forests: pinned examples") {
  REQUIRE(spanning_2forests(graphs::k2()) == std::vector<EdgeSubset>{EdgeSubset(1)});
  REQUIRE(spanning_2forests(graphs::cycle(3)) ==
          std::vector<EdgeSubset>{subset(3, {0}), subset(3, {1}), subset(3, {2})});
  REQUIRE(spanning_2forests(graphs::path(3)) == std::vector<EdgeSubset>{subset(2, {0}), subset(2, {1})});
  REQUIRE_THROWS_WITH(spanning_2forests(Multigraph(1, {})), "no 2-forest exists");
}

TEST_CASE("enumerations agree with the DFS oracle on the small corpus") {
  CorpusOptions opt;
  opt.max_n = 4;
  opt.max_m = 6;
  opt.enumerate_threshold = 300;
  opt.sample_per_stratum = 12;
  opt.top_n_sample_per_stratum = 12;
  for (const Multigraph& g : generate_corpus(opt)) {
    auto trees = spanning_trees(g);
    auto oracle_trees = oracle::spanning_trees(g);
    REQUIRE(trees.size() == oracle_trees.size());
    for (size_t i = 0; i < trees.size(); ++i) REQUIRE(oracle::to_set(trees[i]) == oracle_trees[i]);
    if (g.n() >= 2) {
      auto forests = spanning_2forests(g);
      auto oracle_forests = oracle::spanning_2forests(g);
      REQUIRE(forests.size() == oracle_forests.size());
      for (size_t i = 0; i < forests.size(); ++i) REQUIRE(oracle::to_set(forests[i]) == oracle_forests[i]);
    }
  }
}

TEST_CASE("forest partition") {
  Multigraph c3 = graphs::cycle(3);
  REQUIRE(forest_partition(c3, subset(3, {0})) == VertexPartition(3, {{0, 1}, {2}}));
  REQUIRE(forest_partition(graphs::k2(), EdgeSubset(1)) == VertexPartition(2, {{0}, {1}}));
  Multigraph path = graphs::path(3);
  REQUIRE(forest_partition(path, subset(2, {1})) == VertexPartition(3, {{0}, {1, 2}}));
  REQUIRE_THROWS_AS(forest_partition(c3, subset(3, {0, 1})), std::invalid_argument);
}

TEST_CASE("crossing edges") {
  Multigraph c3 = graphs::cycle(3);
  REQUIRE(crossing_edges(c3, VertexPartition(3, {{0, 1}, {2}})) == subset(3, {1, 2}));
  REQUIRE(crossing_edges(c3, VertexPartition(3, {{0, 1, 2}})).empty());
  REQUIRE(crossing_edges(graphs::banana(3), VertexPartition(2, {{0}, {1}})) == subset(3, {0, 1, 2}));
  // self-loops never cross
  Multigraph loops(2, {{0, 1}, {0, 0}});
  REQUIRE(crossing_edges(loops, VertexPartition(2, {{0}, {1}})) == subset(2, {0}));
}

TEST_CASE("contract") {
  Multigraph c3 = graphs::cycle(3);
  Contraction q = contract(c3, subset(3, {0}));
  REQUIRE(q.graph.n() == 2);
  REQUIRE(q.graph.m() == 2);
  REQUIRE(q.vertex_map == std::vector<int>{0, 0, 1});
  REQUIRE(q.edge_map == std::vector<int>{-1, 0, 1});
  // both survivors run between the two classes (a parallel pair)
  for (const Edge& e : q.graph.edges()) REQUIRE(e.tail != e.head);

  Contraction id = contract(c3, EdgeSubset(3));
  REQUIRE(id.graph.n() == 3);
  REQUIRE(id.graph.m() == 3);
  REQUIRE(id.vertex_map == std::vector<int>{0, 1, 2});

  Contraction k2 = contract(graphs::k2(), subset(1, {0}));
  REQUIRE(k2.graph.n() == 1);
  REQUIRE(k2.graph.m() == 0);

  // an uncontracted edge that becomes a loop survives as a loop
  Multigraph pp = graphs::parallel_pair_path();
  Contraction q2 = contract(pp, subset(3, {0}));
  REQUIRE(q2.graph.m() == 2);
  REQUIRE(q2.edge_map == std::vector<int>{-1, 0, 1});
  REQUIRE(q2.graph.edge(1).tail == q2.graph.edge(1).head);
}

TEST_CASE("crossing edges of a forest partition avoid the forest") {
  CorpusOptions opt;
  opt.max_n = 4;
  opt.max_m = 6;
  opt.enumerate_threshold = 300;
  opt.sample_per_stratum = 10;
  opt.top_n_sample_per_stratum = 10;
  for (const Multigraph& g : generate_corpus(opt))
    for (const EdgeSubset& f : spanning_2forests(g))
      REQUIRE(crossing_edges(g, forest_partition(g, f)).intersect(f).empty());
}

TEST_CASE("2-forests are exactly deduplicated tree-minus-edge sets") {
  CorpusOptions opt;
  opt.max_n = 4;
  opt.max_m = 6;
  opt.enumerate_threshold = 300;
  opt.sample_per_stratum = 10;
  opt.top_n_sample_per_stratum = 10;
  for (const Multigraph& g : generate_corpus(opt)) {
    std::set<std::uint64_t> from_trees;
    for (const EdgeSubset& t : spanning_trees(g)) t.for_each([&](int e) { from_trees.insert(t.without(e).bits()); });
    std::set<std::uint64_t> listed;
    for (const EdgeSubset& f : spanning_2forests(g)) listed.insert(f.bits());
    REQUIRE(from_trees == listed);
  }
}
