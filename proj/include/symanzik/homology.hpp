#pragma once

#include <stdexcept>
#include <vector>

#include "symanzik/matrix.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/rational.hpp"

namespace symanzik {

/// n x m incidence matrix of the boundary map: column e is
/// indicator(head) - indicator(tail). Self-loop columns are zero.
inline Matrix boundary_matrix(const Multigraph& g) {
  Matrix d(g.n(), g.m());
  for (const Edge& e : g.edges()) {
    d(e.head, e.id) += 1;
    d(e.tail, e.id) -= 1;
  }
  return d;
}

/// Lexicographically least spanning tree: greedy over edge ids (matroid
/// greedy gives the minimum basis in the sequence order).
inline EdgeSubset canonical_spanning_tree(const Multigraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  UnionFind uf(g.n());
  EdgeSubset t(g.m());
  for (const Edge& e : g.edges())
    if (uf.unite(e.tail, e.head)) t = t.with(e.id);
  return t;
}

/// Fundamental-cycle basis of the cycle space for a chosen spanning tree.
/// Row order follows ascending non-tree edge ids; each row carries +1 on its
/// defining non-tree edge.
struct CycleBasis {
  EdgeSubset tree;
  std::vector<int> nontree_edges;
  Matrix M;  // h x m, entries in {-1,0,1}, rows span ker(boundary)
};

namespace detail {

/// Signed tree path from vertex `from` to vertex `to`: coefficients +1/-1 on
/// tree edges traversed along/against their orientation.
inline std::vector<Rat> tree_path_chain(const Multigraph& g, const EdgeSubset& tree, int from, int to) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.n());  // (neighbor, edge id)
  tree.for_each([&](int e) {
    adj[g.edge(e).tail].push_back({g.edge(e).head, e});
    adj[g.edge(e).head].push_back({g.edge(e).tail, e});
  });
  std::vector<int> prev_edge(g.n(), -1), prev_vertex(g.n(), -1);
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack = {from};
  seen[from] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) break;
    for (auto [w, e] : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        prev_vertex[w] = v;
        prev_edge[w] = e;
        stack.push_back(w);
      }
  }
  if (!seen[to]) throw std::invalid_argument("tree does not connect the requested vertices");
  std::vector<Rat> chain(g.m(), Rat(0));
  for (int v = to; v != from; v = prev_vertex[v]) {
    int e = prev_edge[v];
    // traversal direction prev_vertex[v] -> v; +1 when that matches tail->head
    chain[e] += (g.edge(e).head == v) ? 1 : -1;
  }
  return chain;
}

}  // namespace detail

inline CycleBasis cycle_basis(const Multigraph& g, const EdgeSubset& t) {
  if (!g.is_spanning_tree(t)) throw std::invalid_argument("edge set is not a spanning tree");
  std::vector<int> nontree = t.complement().ids();
  Matrix M(static_cast<int>(nontree.size()), g.m());
  for (size_t r = 0; r < nontree.size(); ++r) {
    int e = nontree[r];
    // cycle = e + tree path from head(e) back to tail(e)
    std::vector<Rat> chain = detail::tree_path_chain(g, t, g.edge(e).head, g.edge(e).tail);
    chain[e] += 1;
    for (int j = 0; j < g.m(); ++j) M(static_cast<int>(r), j) = chain[j];
  }
  return CycleBasis{t, std::move(nontree), std::move(M)};
}

inline CycleBasis cycle_basis(const Multigraph& g) { return cycle_basis(g, canonical_spanning_tree(g)); }

/// A lift omega with boundary(omega) = p, supported on the given spanning
/// tree (solved by leaf elimination), zero on non-tree edges.
struct MomentumLift {
  EdgeSubset tree;
  std::vector<Rat> omega;  // length m
};

inline MomentumLift momentum_lift(const Multigraph& g, const std::vector<Rat>& p, const EdgeSubset& tree) {
  if (static_cast<int>(p.size()) != g.n()) throw std::invalid_argument("momentum vector length mismatch");
  if (!g.is_spanning_tree(tree)) throw std::invalid_argument("edge set is not a spanning tree");
  Rat total(0);
  for (const Rat& x : p) total += x;
  if (sgn(total) != 0) throw std::invalid_argument("momentum not conserved");

  std::vector<Rat> residual = p;
  std::vector<Rat> omega(g.m(), Rat(0));
  std::vector<std::vector<std::pair<int, int>>> adj(g.n());
  tree.for_each([&](int e) {
    adj[g.edge(e).tail].push_back({g.edge(e).head, e});
    adj[g.edge(e).head].push_back({g.edge(e).tail, e});
  });
  std::vector<int> degree(g.n(), 0);
  for (int v = 0; v < g.n(); ++v) degree[v] = static_cast<int>(adj[v].size());
  std::vector<char> done(g.n(), 0);
  std::vector<int> leaves;
  for (int v = 0; v < g.n(); ++v)
    if (degree[v] == 1) leaves.push_back(v);

  // Peel leaves; each leaf edge must carry exactly the residual at the leaf.
  int processed = 0;
  while (!leaves.empty()) {
    int v = leaves.back();
    leaves.pop_back();
    if (done[v]) continue;
    done[v] = 1;
    ++processed;
    for (auto [w, e] : adj[v]) {
      if (done[w]) continue;
      // boundary(x*e) contributes +x at head, -x at tail
      omega[e] = (g.edge(e).tail == v) ? -residual[v] : residual[v];
      residual[w] += residual[v];
      residual[v] = 0;
      if (--degree[w] == 1) leaves.push_back(w);
      break;
    }
  }
  return MomentumLift{tree, std::move(omega)};
}

inline MomentumLift momentum_lift(const Multigraph& g, const std::vector<Rat>& p) {
  return momentum_lift(g, p, canonical_spanning_tree(g));
}

/// (h+1) x m matrix N: the rows of M followed by the lift row omega.
inline Matrix extended_matrix(const CycleBasis& B, const MomentumLift& w) {
  if (B.M.cols() != static_cast<int>(w.omega.size()))
    throw std::invalid_argument("cycle basis and lift live on different graphs");
  Matrix N(B.M.rows() + 1, B.M.cols());
  for (int i = 0; i < B.M.rows(); ++i)
    for (int j = 0; j < B.M.cols(); ++j) N(i, j) = B.M(i, j);
  for (int j = 0; j < B.M.cols(); ++j) N(B.M.rows(), j) = w.omega[j];
  return N;
}

}  // namespace symanzik
