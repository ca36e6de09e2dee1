#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "symanzik/corpus.hpp"
#include "symanzik/homology.hpp"

using namespace symanzik;

namespace {
EdgeSubset subset(int m, std::initializer_list<int> ids) {
  EdgeSubset s(m);
  for (int e : ids) s = s.with(e);
  return s;
}
}  // namespace

TEST_CASE("boundary matrix") {
  Matrix d = boundary_matrix(graphs::k2());
  REQUIRE(d(0, 0) == Rat(-1));
  REQUIRE(d(1, 0) == Rat(1));

  Matrix dl = boundary_matrix(Multigraph(1, {{0, 0}}));
  REQUIRE(sgn(dl(0, 0)) == 0);  // self-loop column is zero

  Matrix dc = boundary_matrix(graphs::cycle(3));
  Matrix expect(3, 3);
  expect(0, 0) = -1; expect(1, 0) = 1;
  expect(1, 1) = -1; expect(2, 1) = 1;
  expect(2, 2) = -1; expect(0, 2) = 1;
  REQUIRE(dc == expect);
}

TEST_CASE("cycle basis: pinned rows") {
  Multigraph c3 = graphs::cycle(3);
  CycleBasis B = cycle_basis(c3, subset(3, {0, 1}));
  REQUIRE(B.M.rows() == 1);
  REQUIRE(B.M(0, 0) == Rat(1));
  REQUIRE(B.M(0, 1) == Rat(1));
  REQUIRE(B.M(0, 2) == Rat(1));

  Multigraph banana = graphs::banana(2);
  CycleBasis Bb = cycle_basis(banana, subset(2, {0}));
  REQUIRE(Bb.M.rows() == 1);
  REQUIRE(Bb.M(0, 1) == Rat(1));           // +1 on the defining non-tree edge
  REQUIRE(Bb.M(0, 0) == Rat(-1));          // e1 - e0 is the cycle

  CycleBasis Bt = cycle_basis(graphs::path(3));
  REQUIRE(Bt.M.rows() == 0);

  REQUIRE_THROWS_AS(cycle_basis(c3, subset(3, {0})), std::invalid_argument);
}

TEST_CASE("cycle rows lie in the kernel of the boundary, corpus-wide") {
  CorpusOptions opt;
  opt.max_n = 4;
  opt.max_m = 6;
  opt.enumerate_threshold = 200;
  opt.sample_per_stratum = 10;
  opt.top_n_sample_per_stratum = 10;
  for (const Multigraph& g : generate_corpus(opt)) {
    for (const EdgeSubset& t : spanning_trees(g)) {
      CycleBasis B = cycle_basis(g, t);
      Matrix prod = boundary_matrix(g) * B.M.transpose();
      for (int i = 0; i < prod.rows(); ++i)
        for (int j = 0; j < prod.cols(); ++j) REQUIRE(sgn(prod(i, j)) == 0);
      // entries stay in {-1, 0, 1} and the defining edge carries +1
      for (int r = 0; r < B.M.rows(); ++r) {
        REQUIRE(B.M(r, B.nontree_edges[r]) == Rat(1));
        for (int j = 0; j < B.M.cols(); ++j) REQUIRE(abs(B.M(r, j)) <= Rat(1));
      }
    }
  }
}

TEST_CASE("canonical tree is the lexicographically least") {
  Multigraph pp = graphs::parallel_pair_path();
  REQUIRE(canonical_spanning_tree(pp) == spanning_trees(pp).front());
  Multigraph c3 = graphs::cycle(3);
  REQUIRE(canonical_spanning_tree(c3) == subset(3, {0, 1}));
}

TEST_CASE("momentum lift") {
  Multigraph k2 = graphs::k2();
  MomentumLift w = momentum_lift(k2, {Rat(1), Rat(-1)});
  REQUIRE(w.omega == std::vector<Rat>{Rat(-1)});

  MomentumLift zero = momentum_lift(graphs::cycle(3), {Rat(0), Rat(0), Rat(0)});
  REQUIRE(zero.omega == std::vector<Rat>(3, Rat(0)));

  MomentumLift c3 = momentum_lift(graphs::cycle(3), {Rat(1), Rat(1), Rat(-2)}, subset(3, {0, 1}));
  REQUIRE(c3.omega == std::vector<Rat>{Rat(-1), Rat(-2), Rat(0)});

  REQUIRE_THROWS_WITH(momentum_lift(k2, {Rat(1), Rat(1)}), "momentum not conserved");
}

TEST_CASE("lift satisfies boundary(omega) = p on random corpus graphs") {
  CorpusOptions opt;
  opt.max_n = 5;
  opt.max_m = 7;
  opt.enumerate_threshold = 120;
  opt.sample_per_stratum = 8;
  opt.top_n_sample_per_stratum = 8;
  Rng rng(2024);
  for (const Multigraph& g : generate_corpus(opt)) {
    std::vector<Rat> p(g.n());
    Rat sum(0);
    for (int v = 0; v + 1 < g.n(); ++v) {
      p[v] = make_rat(rng.irange(-5, 5), rng.irange(1, 3));
      sum += p[v];
    }
    p[g.n() - 1] = -sum;
    MomentumLift w = momentum_lift(g, p);
    Matrix d = boundary_matrix(g);
    for (int v = 0; v < g.n(); ++v) {
      Rat acc(0);
      for (int e = 0; e < g.m(); ++e) acc += d(v, e) * w.omega[e];
      REQUIRE(acc == p[v]);
    }
    // supported on the tree only
    for (int e = 0; e < g.m(); ++e)
      if (!w.tree.contains(e)) REQUIRE(sgn(w.omega[e]) == 0);
  }
}

TEST_CASE("extended matrix") {
  Multigraph c3 = graphs::cycle(3);
  CycleBasis B = cycle_basis(c3, subset(3, {0, 1}));
  Matrix N = extended_matrix(B, momentum_lift(c3, {Rat(1), Rat(1), Rat(-2)}, B.tree));
  REQUIRE(N.rows() == 2);
  REQUIRE(N(0, 0) == Rat(1));
  REQUIRE(N(1, 0) == Rat(-1));
  REQUIRE(N(1, 1) == Rat(-2));
  REQUIRE(sgn(N(1, 2)) == 0);

  Matrix Nz = extended_matrix(B, momentum_lift(c3, {Rat(0), Rat(0), Rat(0)}, B.tree));
  for (int j = 0; j < 3; ++j) REQUIRE(sgn(Nz(1, j)) == 0);

  CycleBasis Bt = cycle_basis(graphs::path(3));
  Matrix Nt = extended_matrix(Bt, momentum_lift(graphs::path(3), {Rat(1), Rat(0), Rat(-1)}, Bt.tree));
  REQUIRE(Nt.rows() == 1);
}
