#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symanzik/multigraph.hpp"

namespace symanzik {

struct BudgetExceeded : std::runtime_error {
  long requested;
  long budget;
  BudgetExceeded(long req, long bud)
      : std::runtime_error("budget exceeded: " + std::to_string(req) + " vertices > cap " + std::to_string(bud)),
        requested(req),
        budget(bud) {}
};

/// A vertex of the exchange graph: side 1 holds (2-forest, tree), side 2
/// holds (tree, 2-forest); the two parts are edge-disjoint.
struct ExchangeVertex {
  int side = 1;
  EdgeSubset first;
  EdgeSubset second;

  bool operator==(const ExchangeVertex& o) const {
    return side == o.side && first == o.first && second == o.second;
  }
  bool operator<(const ExchangeVertex& o) const {
    if (side != o.side) return side < o.side;
    if (first != o.first) return first < o.first;
    return second < o.second;
  }
  std::string str() const {
    return "(" + first.str() + "," + second.str() + ")@" + std::to_string(side);
  }
};

/// The bipartite exchange graph of a connected multigraph: vertices are the
/// edge-disjoint (2-forest, tree) and (tree, 2-forest) pairs, adjacency is
/// given by single-edge pivots.
class ExchangeGraph {
 public:
  ExchangeGraph(Multigraph g, std::vector<ExchangeVertex> verts,
                std::vector<std::vector<std::pair<int, int>>> adj)
      : g_(std::move(g)), verts_(std::move(verts)), adj_(std::move(adj)) {
    compute_components();
  }

  const Multigraph& graph() const { return g_; }
  int num_vertices() const { return static_cast<int>(verts_.size()); }
  const std::vector<ExchangeVertex>& vertices() const { return verts_; }
  const ExchangeVertex& vertex(int i) const { return verts_.at(i); }

  /// Neighbors as (vertex index, pivot edge id) pairs.
  const std::vector<std::pair<int, int>>& neighbors(int i) const { return adj_.at(i); }

  long num_edges() const {
    long twice = 0;
    for (const auto& a : adj_) twice += static_cast<long>(a.size());
    return twice / 2;
  }

  int component_of(int i) const { return comp_.at(i); }
  int num_components() const { return num_components_; }

  std::vector<int> component_members(int c) const {
    std::vector<int> out;
    for (int i = 0; i < num_vertices(); ++i)
      if (comp_[i] == c) out.push_back(i);
    return out;
  }

  /// Index of a vertex, or -1 when absent.
  int find(const ExchangeVertex& v) const {
    auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
    if (it == verts_.end() || !(*it == v)) return -1;
    return static_cast<int>(it - verts_.begin());
  }

 private:
  void compute_components() {
    int n = num_vertices();
    UnionFind uf(n == 0 ? 1 : n);
    for (int i = 0; i < n; ++i)
      for (auto [j, e] : adj_[i]) uf.unite(i, j);
    comp_.assign(n, -1);
    num_components_ = 0;
    std::map<int, int> relabel;  // root -> component id, in order of first member
    for (int i = 0; i < n; ++i) {
      int r = uf.find(i);
      auto it = relabel.find(r);
      if (it == relabel.end()) it = relabel.emplace(r, num_components_++).first;
      comp_[i] = it->second;
    }
  }

  Multigraph g_;
  std::vector<ExchangeVertex> verts_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<int> comp_;
  int num_components_ = 0;
};

/// Builds the full exchange graph. Vertices are listed side 1 first, each
/// side ordered lexicographically, so reports are reproducible. Throws
/// BudgetExceeded when the vertex count would exceed the cap.
inline ExchangeGraph build_exchange_graph(const Multigraph& g, long budget = 200000) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  std::vector<EdgeSubset> trees = spanning_trees(g);
  std::vector<EdgeSubset> forests = g.n() >= 2 ? spanning_2forests(g) : std::vector<EdgeSubset>{};

  long count = 0;
  for (const EdgeSubset& f : forests)
    for (const EdgeSubset& t : trees)
      if (f.disjoint(t)) ++count;
  if (2 * count > budget) throw BudgetExceeded(2 * count, budget);

  std::vector<ExchangeVertex> verts;
  verts.reserve(static_cast<size_t>(2 * count));
  for (const EdgeSubset& f : forests)
    for (const EdgeSubset& t : trees)
      if (f.disjoint(t)) verts.push_back(ExchangeVertex{1, f, t});
  size_t side1 = verts.size();
  for (const EdgeSubset& t : trees)
    for (const EdgeSubset& f : forests)
      if (f.disjoint(t)) verts.push_back(ExchangeVertex{2, t, f});
  std::sort(verts.begin(), verts.begin() + static_cast<long>(side1));
  std::sort(verts.begin() + static_cast<long>(side1), verts.end());

  auto index_of = [&](const ExchangeVertex& v) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    return static_cast<int>(it - verts.begin());
  };

  std::vector<std::vector<std::pair<int, int>>> adj(verts.size());
  for (size_t i = 0; i < side1; ++i) {
    const EdgeSubset& f = verts[i].first;
    const EdgeSubset& t = verts[i].second;
    EdgeSubset crossing = crossing_edges(g, g.components_of(f));
    EdgeSubset pivots = t.intersect(crossing);
    pivots.for_each([&](int e) {
      ExchangeVertex w{2, f.with(e), t.without(e)};
      int j = index_of(w);
      adj[i].push_back({j, e});
      adj[j].push_back({static_cast<int>(i), e});
    });
  }
  return ExchangeGraph(g, std::move(verts), std::move(adj));
}

/// Single pivot move. Errors name the violated condition.
inline ExchangeVertex pivot(const Multigraph& g, const ExchangeVertex& v, int e) {
  const EdgeSubset& tree = v.side == 1 ? v.second : v.first;
  const EdgeSubset& forest = v.side == 1 ? v.first : v.second;
  if (!g.is_spanning_tree(tree) || !g.is_spanning_2forest(forest) || !tree.disjoint(forest))
    throw std::invalid_argument("not an exchange-graph vertex");
  if (!tree.contains(e)) throw std::invalid_argument("pivot edge is not in the tree part");
  EdgeSubset new_tree = forest.with(e);
  if (!g.is_spanning_tree(new_tree))
    throw std::invalid_argument("forest plus pivot edge is not a spanning tree");
  EdgeSubset new_forest = tree.without(e);
  if (v.side == 1) return ExchangeVertex{2, new_tree, new_forest};
  return ExchangeVertex{1, new_forest, new_tree};
}

namespace detail {

inline int edges_within(const Multigraph& g, const EdgeSubset& g0, unsigned mask) {
  int c = 0;
  g0.for_each([&](int e) {
    if (((mask >> g.edge(e).tail) & 1) && ((mask >> g.edge(e).head) & 1)) ++c;
  });
  return c;
}

}  // namespace detail

/// Partition of V into the maximal saturated sets of the spanning subgraph
/// G0 (X is saturated when G0[X] has exactly 2|X|-2 edges; singletons
/// vacuously). Requires G0 to split as a disjoint spanning tree plus
/// spanning 2-forest; maximal saturated sets are then pairwise disjoint.
inline VertexPartition saturated_partition(const Multigraph& g, const EdgeSubset& g0) {
  if (g0.ambient() != g.m()) throw std::invalid_argument("edge subset from a different graph");
  if (g.n() > 20) throw std::invalid_argument("saturated_partition: vertex count too large for subset scan");
  if (g.n() < 2 || g0.size() != 2 * g.n() - 3)
    throw std::invalid_argument("edge set does not split into a spanning tree and a spanning 2-forest");
  bool splits = false;
  for_each_ksubset(g.m(), g.n() - 1, [&](const EdgeSubset& t) {
    if (splits || !t.subset_of(g0)) return;
    if (g.is_spanning_tree(t) && g.is_acyclic(g0.minus(t))) splits = true;
  });
  if (!splits)
    throw std::invalid_argument("edge set does not split into a spanning tree and a spanning 2-forest");

  std::vector<unsigned> saturated;
  for (unsigned mask = 1; mask < (1u << g.n()); ++mask) {
    int k = __builtin_popcount(mask);
    if (detail::edges_within(g, g0, mask) == 2 * k - 2) saturated.push_back(mask);
  }
  std::vector<std::vector<int>> blocks;
  std::vector<char> covered(g.n(), 0);
  for (unsigned x : saturated) {
    bool maximal = true;
    for (unsigned y : saturated)
      if (y != x && (x & y) == x) { maximal = false; break; }
    if (!maximal) continue;
    std::vector<int> block;
    for (int v = 0; v < g.n(); ++v)
      if ((x >> v) & 1) {
        if (covered[v]) throw std::logic_error("maximal saturated sets overlap");
        covered[v] = 1;
        block.push_back(v);
      }
    blocks.push_back(std::move(block));
  }
  return VertexPartition(g.n(), std::move(blocks));
}

namespace detail {

/// Components of T minus the crossing edges of the forest partition P(F).
inline VertexPartition tree_minus_crossing(const Multigraph& g, const EdgeSubset& tree, const EdgeSubset& forest) {
  EdgeSubset crossing = crossing_edges(g, g.components_of(forest));
  return g.components_of(tree.minus(crossing));
}

}  // namespace detail

/// The equivalence partition of a nonempty component: u ~ v when every
/// side-1 member (F,T) keeps u,v in one component of T minus the crossing
/// edges of P(F). Asserts that the side-2 computation gives the same
/// partition and that both coincide with the saturated partition of the
/// component's spanning subgraph; a mismatch would falsify the construction
/// and raises.
inline VertexPartition vertex_equivalence(const Multigraph& g, const ExchangeGraph& H, int comp_id) {
  std::vector<int> members = H.component_members(comp_id);
  if (members.empty()) throw std::invalid_argument("empty component");

  VertexPartition p1(g.n(), {[&] {
                       std::vector<int> all(g.n());
                       for (int v = 0; v < g.n(); ++v) all[v] = v;
                       return all;
                     }()});
  VertexPartition p2 = p1;
  for (int i : members) {
    const ExchangeVertex& v = H.vertex(i);
    if (v.side == 1)
      p1 = p1.refine(detail::tree_minus_crossing(g, v.second, v.first));
    else
      p2 = p2.refine(detail::tree_minus_crossing(g, v.first, v.second));
  }
  if (p1 != p2) throw std::logic_error("side-1 and side-2 equivalence relations disagree");

  const ExchangeVertex& any = H.vertex(members.front());
  EdgeSubset g0 = any.first.unite(any.second);
  if (p1 != saturated_partition(g, g0))
    throw std::logic_error("equivalence partition differs from the saturated partition");
  return p1;
}

/// Three-way equivalence behind the partition: u ~ v fails iff some side-1
/// member separates u,v in its forest iff some side-2 member does.
inline bool separation_characterization_holds(const Multigraph& g, const ExchangeGraph& H, int comp_id,
                                              const VertexPartition& eq) {
  std::vector<int> members = H.component_members(comp_id);
  if (members.empty()) return true;
  std::vector<std::pair<int, VertexPartition>> parts;  // (side, forest partition)
  parts.reserve(members.size());
  for (int i : members) {
    const ExchangeVertex& w = H.vertex(i);
    parts.emplace_back(w.side, g.components_of(w.side == 1 ? w.first : w.second));
  }
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v) {
      bool sep1 = false, sep2 = false;
      for (const auto& [side, part] : parts) (side == 1 ? sep1 : sep2) |= !part.same_block(u, v);
      bool not_equivalent = !eq.same_block(u, v);
      if (sep1 != not_equivalent || sep2 != not_equivalent) return false;
    }
  return true;
}

/// Classifying data of one component: the spanning subgraph G0, its
/// saturated partition, and the fixed induced tree pair per block.
struct ComponentProfile {
  EdgeSubset g0;
  VertexPartition blocks;
  std::vector<std::pair<EdgeSubset, EdgeSubset>> block_trees;  // (T_{j,1}, T_{j,2})
};

namespace detail {

inline EdgeSubset induced_edges(const Multigraph& g, const EdgeSubset& s, const std::vector<int>& block) {
  auto in_block = [&](int v) { return std::binary_search(block.begin(), block.end(), v); };
  EdgeSubset out(g.m());
  s.for_each([&](int e) {
    if (in_block(g.edge(e).tail) && in_block(g.edge(e).head)) out = out.with(e);
  });
  return out;
}

}  // namespace detail

inline ComponentProfile component_profile(const Multigraph& g, const ExchangeGraph& H, int comp_id) {
  std::vector<int> members = H.component_members(comp_id);
  if (members.empty()) throw std::invalid_argument("empty component");
  const ExchangeVertex& any = H.vertex(members.front());
  ComponentProfile p;
  p.g0 = any.first.unite(any.second);
  p.blocks = saturated_partition(g, p.g0);
  for (const auto& block : p.blocks.blocks())
    p.block_trees.emplace_back(detail::induced_edges(g, any.first, block),
                               detail::induced_edges(g, any.second, block));
  return p;
}

/// Full verification report for the classification theorem.
struct ThmConnReport {
  bool within_budget = true;
  long vertex_count = 0;
  long edge_count = 0;
  int num_components = 0;
  bool vacuous = false;  // empty exchange graph: zero components, nothing to classify

  bool part1_connected = false;
  bool part1_cond_i = false;   // E(G) = E(T) disjoint-union E(F)
  bool part1_cond_ii = false;  // every saturated subset of (V, E(G)) is a singleton
  bool part1_ok = false;       // biconditional holds

  bool part2_ok = true;       // predicted component vertex sets match exactly
  bool equiv_ok = true;       // equivalence partitions consistent (both sides + saturated)
  bool pivot_blocks_ok = true;  // no pivot witness inside a saturated block
  std::string first_mismatch;

  std::vector<ComponentProfile> profiles;

  bool all_ok() const {
    return within_budget && part1_ok && part2_ok && equiv_ok && pivot_blocks_ok;
  }
};

inline ThmConnReport verify_thm_conn(const Multigraph& g, long budget = 200000) {
  ThmConnReport r;
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  if (g.n() < 2) throw std::invalid_argument("classification needs at least two vertices");
  if (g.n() > 20) throw std::invalid_argument("classification needs n <= 20 (exhaustive subset scans)");

  ExchangeGraph H(g, {}, {});
  try {
    H = build_exchange_graph(g, budget);
  } catch (const BudgetExceeded&) {
    r.within_budget = false;
    return r;
  }
  r.vertex_count = H.num_vertices();
  r.edge_count = H.num_edges();
  r.num_components = H.num_components();
  r.vacuous = H.num_vertices() == 0;

  // Part (1). Self-loops lie in no spanning tree, no 2-forest and no pivot,
  // so the exchange graph of G equals that of G minus its loops; both
  // conditions are read on the loop-free edge set.
  EdgeSubset loopfree(g.m());
  for (const Edge& e : g.edges())
    if (e.tail != e.head) loopfree = loopfree.with(e.id);

  r.part1_connected = (H.num_components() == 1);
  r.part1_cond_i = (loopfree.size() == 2 * g.n() - 3) && H.num_vertices() > 0;
  r.part1_cond_ii = true;
  for (unsigned mask = 1; mask < (1u << g.n()); ++mask) {
    int k = __builtin_popcount(mask);
    if (k >= 2 && detail::edges_within(g, loopfree, mask) == 2 * k - 2) {
      r.part1_cond_ii = false;
      break;
    }
  }
  r.part1_ok = (r.part1_connected == (r.part1_cond_i && r.part1_cond_ii));
  if (!r.part1_ok && r.first_mismatch.empty()) r.first_mismatch = "part (1) biconditional fails";

  // Part (2): each component must equal its predicted vertex set exactly.
  // Candidates are pre-grouped by the union of the two parts: only vertices
  // sharing the component's G0 can possibly match its profile.
  std::map<std::uint64_t, std::vector<int>> by_union;
  for (int i = 0; i < H.num_vertices(); ++i)
    by_union[H.vertex(i).first.unite(H.vertex(i).second).bits()].push_back(i);

  for (int c = 0; c < H.num_components(); ++c) {
    std::vector<int> members = H.component_members(c);
    ComponentProfile prof;
    try {
      prof = component_profile(g, H, c);
    } catch (const std::exception& ex) {
      r.part2_ok = false;
      if (r.first_mismatch.empty()) r.first_mismatch = std::string("profile failure: ") + ex.what();
      continue;
    }

    std::vector<int> predicted;
    for (int i : by_union[prof.g0.bits()]) {
      const ExchangeVertex& v = H.vertex(i);
      bool match = true;
      for (size_t j = 0; j < prof.block_trees.size() && match; ++j) {
        const auto& block = prof.blocks.block(static_cast<int>(j));
        match = detail::induced_edges(g, v.first, block) == prof.block_trees[j].first &&
                detail::induced_edges(g, v.second, block) == prof.block_trees[j].second;
      }
      if (match) predicted.push_back(i);
    }
    if (predicted != members) {
      r.part2_ok = false;
      if (r.first_mismatch.empty()) {
        int witness = -1;
        for (int i : predicted)
          if (!std::binary_search(members.begin(), members.end(), i)) { witness = i; break; }
        if (witness < 0)
          for (int i : members)
            if (!std::binary_search(predicted.begin(), predicted.end(), i)) { witness = i; break; }
        r.first_mismatch = "component " + std::to_string(c) + " mismatch at vertex " +
                           (witness >= 0 ? H.vertex(witness).str() : std::string("?"));
      }
    }

    try {
      VertexPartition eq = vertex_equivalence(g, H, c);
      if (eq != prof.blocks) {
        r.equiv_ok = false;
        if (r.first_mismatch.empty()) r.first_mismatch = "equivalence partition differs from profile blocks";
      }
      if (!separation_characterization_holds(g, H, c, eq)) {
        r.equiv_ok = false;
        if (r.first_mismatch.empty()) r.first_mismatch = "separation characterization fails";
      }
    } catch (const std::exception& ex) {
      r.equiv_ok = false;
      if (r.first_mismatch.empty()) r.first_mismatch = std::string("equivalence failure: ") + ex.what();
    }

    for (int i : members)
      for (auto [j, e] : H.neighbors(i))
        if (prof.blocks.same_block(g.edge(e).tail, g.edge(e).head)) {
          r.pivot_blocks_ok = false;
          if (r.first_mismatch.empty())
            r.first_mismatch = "pivot witness e" + std::to_string(e) + " inside a saturated block";
        }

    r.profiles.push_back(std::move(prof));
  }
  return r;
}

/// Contracting the per-block trees of a component collapses it onto the
/// (connected) exchange graph of the quotient: checks that the induced map
/// is a graph isomorphism.
inline bool contraction_consistency_holds(const Multigraph& g, const ExchangeGraph& H, int comp_id,
                                          long budget = 200000) {
  std::vector<int> members = H.component_members(comp_id);
  if (members.empty()) return false;
  ComponentProfile prof = component_profile(g, H, comp_id);

  // Restrict to the spanning subgraph G0, then contract all block-internal edges.
  std::vector<int> g0_ids = prof.g0.ids();
  std::vector<std::pair<int, int>> endpoints;
  endpoints.reserve(g0_ids.size());
  std::vector<int> restrict_map(g.m(), -1);
  for (size_t i = 0; i < g0_ids.size(); ++i) {
    restrict_map[g0_ids[i]] = static_cast<int>(i);
    endpoints.emplace_back(g.edge(g0_ids[i]).tail, g.edge(g0_ids[i]).head);
  }
  Multigraph g0(g.n(), std::move(endpoints));
  EdgeSubset internal(g0.m());
  for (size_t i = 0; i < g0_ids.size(); ++i)
    if (prof.blocks.same_block(g0.edge(static_cast<int>(i)).tail, g0.edge(static_cast<int>(i)).head))
      internal = internal.with(static_cast<int>(i));
  Contraction q = contract(g0, internal);

  ExchangeGraph Hq = build_exchange_graph(q.graph, budget);
  if (Hq.num_components() != 1 || Hq.num_vertices() == 0) return false;
  if (static_cast<int>(members.size()) != Hq.num_vertices()) return false;

  auto push_down = [&](const EdgeSubset& s) {
    EdgeSubset out(q.graph.m());
    s.for_each([&](int e) {
      int re = restrict_map[e];
      if (re >= 0 && q.edge_map[re] >= 0) out = out.with(q.edge_map[re]);
    });
    return out;
  };

  std::vector<int> image(H.num_vertices(), -1);
  std::vector<char> hit(Hq.num_vertices(), 0);
  for (int i : members) {
    const ExchangeVertex& v = H.vertex(i);
    ExchangeVertex w{v.side, push_down(v.first), push_down(v.second)};
    int j = Hq.find(w);
    if (j < 0 || hit[j]) return false;
    hit[j] = 1;
    image[i] = j;
  }
  // Adjacency must correspond exactly (pivot edges map through the id maps).
  for (int i : members) {
    std::vector<int> a, b;
    for (auto [j, e] : H.neighbors(i)) a.push_back(image[j]);
    for (auto [j, e] : Hq.neighbors(image[i])) b.push_back(j);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return false;
  }
  return true;
}

/// DOT rendering with side coloring and component labels.
inline std::string to_dot(const ExchangeGraph& H, const std::string& name = "exchange") {
  std::string s = "graph " + name + " {\n  node [style=filled];\n";
  for (int i = 0; i < H.num_vertices(); ++i) {
    const ExchangeVertex& v = H.vertex(i);
    s += "  v" + std::to_string(i) + " [label=\"" + v.first.str() + "|" + v.second.str() + "\\ncomponent " +
         std::to_string(H.component_of(i)) + "\", fillcolor=" +
         (v.side == 1 ? "\"lightskyblue\"" : "\"palegoldenrod\"") + "];\n";
  }
  for (int i = 0; i < H.num_vertices(); ++i)
    for (auto [j, e] : H.neighbors(i))
      if (i < j) s += "  v" + std::to_string(i) + " -- v" + std::to_string(j) + " [label=\"e" + std::to_string(e) + "\"];\n";
  s += "}\n";
  return s;
}

}  // namespace symanzik
