#pragma once

// Test-only oracles. These deliberately avoid the library's machinery:
// subsets come from recursive enumeration (no bitset combinations), graph
// checks use DFS component counts (no union-find), and determinants use
// Laplace expansion (no elimination). They are the independent route the
// unit tests compare against.

#include <set>
#include <vector>

#include "symanzik/matrix.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/rational.hpp"

namespace oracle {

using symanzik::Matrix;
using symanzik::Multigraph;
using symanzik::Rat;

inline void subsets_rec(int m, int k, int start, std::set<int>& cur, std::vector<std::set<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int e = start; e < m; ++e) {
    cur.insert(e);
    subsets_rec(m, k, e + 1, cur, out);
    cur.erase(e);
  }
}

inline std::vector<std::set<int>> subsets_of_size(int m, int k) {
  std::vector<std::set<int>> out;
  std::set<int> cur;
  if (k >= 0 && k <= m) subsets_rec(m, k, 0, cur, out);
  return out;
}

inline int dfs_components(const Multigraph& g, const std::set<int>& edges) {
  std::vector<std::vector<int>> adj(g.n());
  for (int e : edges) {
    adj[g.edge(e).tail].push_back(g.edge(e).head);
    adj[g.edge(e).head].push_back(g.edge(e).tail);
  }
  std::vector<char> seen(g.n(), 0);
  int comps = 0;
  for (int s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<int> stack = {s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

// A subgraph with k edges on n vertices is acyclic iff it has n - k
// components; spanning trees and 2-forests fall out of the size + component
// count alone.
inline std::vector<std::set<int>> spanning_trees(const Multigraph& g) {
  std::vector<std::set<int>> out;
  for (const auto& s : subsets_of_size(g.m(), g.n() - 1))
    if (dfs_components(g, s) == 1) out.push_back(s);
  return out;
}

inline std::vector<std::set<int>> spanning_2forests(const Multigraph& g) {
  std::vector<std::set<int>> out;
  for (const auto& s : subsets_of_size(g.m(), g.n() - 2))
    if (dfs_components(g, s) == 2) out.push_back(s);
  return out;
}

inline Rat det_laplace(const Matrix& a) {
  int n = a.rows();
  if (n == 0) return Rat(1);
  if (n == 1) return a(0, 0);
  Rat total(0);
  std::vector<int> cols;
  for (int j = 1; j < n; ++j) cols.push_back(j);
  std::vector<int> rows;
  for (int i = 0; i < n; ++i) rows.push_back(i);
  for (int i = 0; i < n; ++i) {
    if (sgn(a(i, 0)) == 0) continue;
    std::vector<int> sub_rows;
    for (int r : rows)
      if (r != i) sub_rows.push_back(r);
    Rat cofactor = det_laplace(a.submatrix(sub_rows, cols));
    total += (i % 2 == 0 ? 1 : -1) * a(i, 0) * cofactor;
  }
  return total;
}

inline std::set<int> to_set(const symanzik::EdgeSubset& s) {
  std::set<int> out;
  for (int e : s.ids()) out.insert(e);
  return out;
}

}  // namespace oracle
