#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "symanzik/corpus.hpp"
#include "symanzik/exchange.hpp"

using namespace symanzik;

namespace {
EdgeSubset subset(int m, std::initializer_list<int> ids) {
  EdgeSubset s(m);
  for (int e : ids) s = s.with(e);
  return s;
}
}  // namespace

TEST_CASE("exchange graph: pinned shapes") {
  ExchangeGraph k2 = build_exchange_graph(graphs::k2());
  REQUIRE(k2.num_vertices() == 2);
  REQUIRE(k2.num_edges() == 1);
  REQUIRE(k2.num_components() == 1);

  ExchangeGraph banana = build_exchange_graph(graphs::banana(3));
  REQUIRE(banana.num_vertices() == 6);
  REQUIRE(banana.num_edges() == 3);
  REQUIRE(banana.num_components() == 3);

  ExchangeGraph c3 = build_exchange_graph(graphs::cycle(3));
  REQUIRE(c3.num_vertices() == 6);
  REQUIRE(c3.num_components() == 1);

  // every vertex pivots somewhere
  for (int i = 0; i < c3.num_vertices(); ++i) REQUIRE_FALSE(c3.neighbors(i).empty());
}

TEST_CASE("exchange graph budget") {
  REQUIRE_THROWS_AS(build_exchange_graph(graphs::banana(3), 4), BudgetExceeded);
}

TEST_CASE("pivot") {
  Multigraph k2 = graphs::k2();
  ExchangeVertex v{2, subset(1, {0}), EdgeSubset(1)};
  ExchangeVertex w = pivot(k2, v, 0);
  REQUIRE(w == ExchangeVertex{1, EdgeSubset(1), subset(1, {0})});
  REQUIRE(pivot(k2, w, 0) == v);  // involution

  // e0=(0,1), e1=(1,2), e2=(0,1): pivoting ({e2},{e0,e1}) at e1 gives ({e1,e2},{e0})
  Multigraph pp = graphs::parallel_pair_path();
  ExchangeVertex s1{1, subset(3, {2}), subset(3, {0, 1})};
  ExchangeVertex s2 = pivot(pp, s1, 1);
  REQUIRE(s2 == ExchangeVertex{2, subset(3, {1, 2}), subset(3, {0})});
  REQUIRE(pivot(pp, s2, 1) == s1);

  REQUIRE_THROWS_WITH(pivot(pp, s1, 2), "pivot edge is not in the tree part");
  REQUIRE_THROWS_WITH(pivot(pp, s1, 0), "forest plus pivot edge is not a spanning tree");
}

TEST_CASE("pivot moves along exchange edges, corpus-wide") {
  CorpusOptions opt;
  opt.max_n = 4;
  opt.max_m = 6;
  opt.enumerate_threshold = 120;
  opt.sample_per_stratum = 6;
  opt.top_n_sample_per_stratum = 6;
  for (const Multigraph& g : generate_corpus(opt)) {
    ExchangeGraph H = build_exchange_graph(g);
    for (int i = 0; i < H.num_vertices(); ++i)
      for (auto [j, e] : H.neighbors(i)) REQUIRE(pivot(g, H.vertex(i), e) == H.vertex(j));
  }
}

TEST_CASE("saturated partition: pinned examples") {
  Multigraph k2 = graphs::k2();
  REQUIRE(saturated_partition(k2, subset(1, {0})) == VertexPartition(2, {{0}, {1}}));

  Multigraph pp = graphs::parallel_pair_path();
  REQUIRE(saturated_partition(pp, subset(3, {0, 1, 2})) == VertexPartition(3, {{0, 1}, {2}}));

  // without a parallel pair nothing of size two saturates
  Multigraph c3 = graphs::cycle(3);
  REQUIRE(saturated_partition(c3, subset(3, {0, 1, 2})) == VertexPartition(3, {{0}, {1}, {2}}));

  REQUIRE_THROWS_AS(saturated_partition(pp, subset(3, {0, 1})), std::invalid_argument);
}

TEST_CASE("vertex equivalence matches the saturated partition") {
  Multigraph pp = graphs::parallel_pair_path();
  ExchangeGraph H = build_exchange_graph(pp);
  REQUIRE(H.num_components() == 2);
  for (int c = 0; c < H.num_components(); ++c) {
    VertexPartition eq = vertex_equivalence(pp, H, c);
    REQUIRE(eq == VertexPartition(3, {{0, 1}, {2}}));
    REQUIRE(separation_characterization_holds(pp, H, c, eq));
  }

  ExchangeGraph k2 = build_exchange_graph(graphs::k2());
  REQUIRE(vertex_equivalence(graphs::k2(), k2, 0) == VertexPartition(2, {{0}, {1}}));

  ExchangeGraph banana = build_exchange_graph(graphs::banana(3));
  for (int c = 0; c < banana.num_components(); ++c)
    REQUIRE(vertex_equivalence(graphs::banana(3), banana, c) == VertexPartition(2, {{0}, {1}}));
}

TEST_CASE("classification theorem: pinned reports") {
  ThmConnReport k2 = verify_thm_conn(graphs::k2());
  REQUIRE(k2.all_ok());
  REQUIRE(k2.part1_connected);
  REQUIRE(k2.part1_cond_i);
  REQUIRE(k2.part1_cond_ii);

  ThmConnReport pp = verify_thm_conn(graphs::parallel_pair_path());
  REQUIRE(pp.all_ok());
  REQUIRE(pp.num_components == 2);
  REQUIRE_FALSE(pp.part1_connected);  // the {0,1} block is saturated, so (ii) fails
  REQUIRE(pp.part1_cond_i);
  REQUIRE_FALSE(pp.part1_cond_ii);
  for (const ComponentProfile& prof : pp.profiles) {
    REQUIRE(prof.g0 == subset(3, {0, 1, 2}));
    REQUIRE(prof.blocks == VertexPartition(3, {{0, 1}, {2}}));
  }
  REQUIRE(pp.profiles[0].block_trees[0] == std::make_pair(subset(3, {0}), subset(3, {2})));
  REQUIRE(pp.profiles[1].block_trees[0] == std::make_pair(subset(3, {2}), subset(3, {0})));

  ThmConnReport banana = verify_thm_conn(graphs::banana(3));
  REQUIRE(banana.all_ok());
  REQUIRE(banana.num_components == 3);
  for (const ComponentProfile& prof : banana.profiles) REQUIRE(prof.g0.size() == 1);

  ThmConnReport c3 = verify_thm_conn(graphs::cycle(3));
  REQUIRE(c3.all_ok());
  REQUIRE(c3.part1_connected);
}

TEST_CASE("exchange graph vertex count matches the oracle pair count") {
  for (const Multigraph& g : {graphs::cycle(3), graphs::banana(3), graphs::parallel_pair_path(), graphs::cycle(4),
                              Multigraph(3, {{0, 1}, {1, 2}, {0, 1}, {2, 0}})}) {
    long pairs = 0;
    for (const auto& t : oracle::spanning_trees(g))
      for (const auto& f : oracle::spanning_2forests(g)) {
        bool disjoint = true;
        for (int e : f)
          if (t.count(e)) disjoint = false;
        if (disjoint) ++pairs;
      }
    REQUIRE(build_exchange_graph(g).num_vertices() == 2 * pairs);
  }
}

TEST_CASE("self-loops are invisible to the classification") {
  // a loop can lie in no tree, no forest and no pivot, so the exchange graph
  // and both classification conditions ignore it
  Multigraph loop_edge(2, {{0, 0}, {0, 1}});
  ThmConnReport rep = verify_thm_conn(loop_edge);
  REQUIRE(rep.all_ok());
  REQUIRE(rep.part1_connected);
  REQUIRE(rep.part1_cond_i);
  REQUIRE(rep.part1_cond_ii);

  Multigraph pp_loop(3, {{0, 1}, {1, 2}, {0, 1}, {2, 2}});
  ThmConnReport rep2 = verify_thm_conn(pp_loop);
  REQUIRE(rep2.all_ok());
  REQUIRE(rep2.num_components == 2);
  ExchangeGraph with_loop = build_exchange_graph(pp_loop);
  ExchangeGraph without = build_exchange_graph(graphs::parallel_pair_path());
  REQUIRE(with_loop.num_vertices() == without.num_vertices());
  REQUIRE(with_loop.num_edges() == without.num_edges());
}

TEST_CASE("classification theorem holds across a corpus slice") {
  CorpusOptions opt;
  opt.max_n = 5;
  opt.max_m = 7;
  opt.enumerate_threshold = 150;
  opt.sample_per_stratum = 8;
  opt.top_n_sample_per_stratum = 8;
  for (const Multigraph& g : generate_corpus(opt)) {
    ThmConnReport rep = verify_thm_conn(g);
    INFO(g.key() << " -> " << rep.first_mismatch);
    REQUIRE(rep.within_budget);
    REQUIRE(rep.all_ok());
  }
}

TEST_CASE("contraction collapses each component onto a connected exchange graph") {
  for (const Multigraph& g : {graphs::parallel_pair_path(), graphs::banana(3), graphs::cycle(4),
                              Multigraph(3, {{0, 1}, {1, 2}, {0, 1}, {1, 2}})}) {
    ExchangeGraph H = build_exchange_graph(g);
    for (int c = 0; c < H.num_components(); ++c) {
      INFO(g.key() << " component " << c);
      REQUIRE(contraction_consistency_holds(g, H, c));
    }
  }
}

TEST_CASE("DOT export is deterministic and tagged by side") {
  ExchangeGraph H = build_exchange_graph(graphs::k2());
  std::string dot = to_dot(H);
  REQUIRE(dot == to_dot(build_exchange_graph(graphs::k2())));
  REQUIRE(dot.find("lightskyblue") != std::string::npos);
  REQUIRE(dot.find("palegoldenrod") != std::string::npos);
  REQUIRE(dot.find("--") != std::string::npos);
}
