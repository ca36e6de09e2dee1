#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace symanzik {

/// Subset of edge ids 0..m-1 of a fixed ambient multigraph, stored as a
/// 64-bit mask. Orderings and reports use the lexicographic order on the
/// ascending id sequence, so output is reproducible byte for byte.
class EdgeSubset {
 public:
  EdgeSubset() = default;
  explicit EdgeSubset(int ambient, std::uint64_t bits = 0) : m_(ambient), bits_(bits) {
    if (ambient < 0 || ambient > 64) throw std::invalid_argument("EdgeSubset: ambient size out of range");
    if (ambient < 64 && (bits >> ambient) != 0) throw std::invalid_argument("EdgeSubset: member id >= ambient size");
  }

  static EdgeSubset full(int ambient) {
    return EdgeSubset(ambient, ambient == 64 ? ~0ull : ((1ull << ambient) - 1));
  }

  int ambient() const { return m_; }
  std::uint64_t bits() const { return bits_; }
  int size() const { return __builtin_popcountll(bits_); }
  bool empty() const { return bits_ == 0; }
  bool contains(int e) const { return e >= 0 && e < m_ && ((bits_ >> e) & 1); }

  EdgeSubset with(int e) const { check_id(e); return EdgeSubset(m_, bits_ | (1ull << e)); }
  EdgeSubset without(int e) const { check_id(e); return EdgeSubset(m_, bits_ & ~(1ull << e)); }

  EdgeSubset unite(const EdgeSubset& o) const { check_ambient(o); return EdgeSubset(m_, bits_ | o.bits_); }
  EdgeSubset intersect(const EdgeSubset& o) const { check_ambient(o); return EdgeSubset(m_, bits_ & o.bits_); }
  EdgeSubset minus(const EdgeSubset& o) const { check_ambient(o); return EdgeSubset(m_, bits_ & ~o.bits_); }
  EdgeSubset complement() const { return EdgeSubset(m_, ~bits_ & full(m_).bits_); }
  bool disjoint(const EdgeSubset& o) const { check_ambient(o); return (bits_ & o.bits_) == 0; }
  bool subset_of(const EdgeSubset& o) const { check_ambient(o); return (bits_ & ~o.bits_) == 0; }

  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b;) {
      int e = __builtin_ctzll(b);
      out.push_back(e);
      b &= b - 1;
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b;) {
      f(__builtin_ctzll(b));
      b &= b - 1;
    }
  }

  bool operator==(const EdgeSubset& o) const { return m_ == o.m_ && bits_ == o.bits_; }
  bool operator!=(const EdgeSubset& o) const { return !(*this == o); }

  // Lexicographic on the ascending id sequence ({0,3} < {1,2}); this is the
  // canonical report order everywhere.
  bool operator<(const EdgeSubset& o) const {
    std::uint64_t a = bits_, b = o.bits_;
    while (a && b) {
      int ea = __builtin_ctzll(a), eb = __builtin_ctzll(b);
      if (ea != eb) return ea < eb;
      a &= a - 1;
      b &= b - 1;
    }
    if (!a && b) return true;   // proper prefix first
    if (a && !b) return false;
    return false;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int e : ids()) {
      if (!first) s += ",";
      s += "e" + std::to_string(e);
      first = false;
    }
    return s + "}";
  }

 private:
  void check_id(int e) const {
    if (e < 0 || e >= m_) throw std::invalid_argument("EdgeSubset: edge id out of range");
  }
  void check_ambient(const EdgeSubset& o) const {
    if (m_ != o.m_) throw std::invalid_argument("EdgeSubset: mismatched ambient sizes");
  }

  int m_ = 0;
  std::uint64_t bits_ = 0;
};

/// Calls f(subset) for every k-subset of {0..m-1}, in lexicographic order of
/// the ascending id sequence.
template <typename F>
void for_each_ksubset(int m, int k, F&& f) {
  if (k < 0 || k > m) return;
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    std::uint64_t bits = 0;
    for (int e : c) bits |= 1ull << e;
    f(EdgeSubset(m, bits));
    int i = k - 1;
    while (i >= 0 && c[i] == m - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

/// Partition of the vertex ids 0..n-1 into disjoint nonempty blocks.
/// Normalized form: each block ascending, blocks ordered by smallest member.
class VertexPartition {
 public:
  VertexPartition() = default;
  VertexPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
    normalize();
    validate();
  }

  /// Builds the partition from a representative labeling (v -> class id).
  static VertexPartition from_labels(const std::vector<int>& label) {
    int n = static_cast<int>(label.size());
    std::vector<std::vector<int>> by_label;
    std::vector<int> slot(n, -1);
    std::vector<std::vector<int>> blocks;
    for (int v = 0; v < n; ++v) {
      int l = label[v];
      if (l < 0 || l >= n) throw std::invalid_argument("partition label out of range");
      if (slot[l] < 0) {
        slot[l] = static_cast<int>(blocks.size());
        blocks.emplace_back();
      }
      blocks[slot[l]].push_back(v);
    }
    return VertexPartition(n, std::move(blocks));
  }

  int n() const { return n_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& block(int i) const { return blocks_.at(i); }

  int block_of(int v) const {
    if (v < 0 || v >= n_) throw std::invalid_argument("vertex id out of range");
    return block_of_[v];
  }
  bool same_block(int u, int v) const { return block_of(u) == block_of(v); }

  bool operator==(const VertexPartition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }
  bool operator!=(const VertexPartition& o) const { return !(*this == o); }

  /// Common refinement: u,v together iff together in both partitions.
  VertexPartition refine(const VertexPartition& o) const {
    if (n_ != o.n_) throw std::invalid_argument("refine: partitions on different vertex sets");
    std::vector<int> label(n_);
    for (int v = 0; v < n_; ++v) label[v] = block_of(v) * o.num_blocks() + o.block_of(v);
    // compress labels into 0..n-1
    std::vector<int> seen;
    std::vector<int> compact(n_);
    for (int v = 0; v < n_; ++v) {
      auto it = std::find(seen.begin(), seen.end(), label[v]);
      if (it == seen.end()) {
        seen.push_back(label[v]);
        compact[v] = static_cast<int>(seen.size()) - 1;
      } else {
        compact[v] = static_cast<int>(it - seen.begin());
      }
    }
    return from_labels(compact);
  }

  std::string str() const {
    std::string s = "{";
    for (size_t i = 0; i < blocks_.size(); ++i) {
      if (i) s += " | ";
      for (size_t j = 0; j < blocks_[i].size(); ++j) {
        if (j) s += ",";
        s += std::to_string(blocks_[i][j]);
      }
    }
    return s + "}";
  }

 private:
  void normalize() {
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    block_of_.assign(n_, -1);
    for (int i = 0; i < static_cast<int>(blocks_.size()); ++i)
      for (int v : blocks_[i]) {
        if (v < 0 || v >= n_) throw std::invalid_argument("partition member out of range");
        if (block_of_[v] != -1) throw std::invalid_argument("partition blocks overlap");
        block_of_[v] = i;
      }
  }
  void validate() const {
    for (const auto& b : blocks_)
      if (b.empty()) throw std::invalid_argument("partition has an empty block");
    for (int v = 0; v < n_; ++v)
      if (block_of_[v] == -1) throw std::invalid_argument("partition does not cover all vertices");
  }

  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

struct Edge {
  int id;
  int tail;
  int head;
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  /// Returns false when x and y were already joined.
  bool unite(int x, int y) {
    int a = find(x), b = find(y);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int components_;
};

/// Oriented finite multigraph. Parallel edges and self-loops are allowed;
/// connectivity is checked on demand, never assumed. Immutable after
/// construction, so shared concurrent use is safe.
class Multigraph {
 public:
  Multigraph(int n, std::vector<std::pair<int, int>> endpoints) : n_(n) {
    if (n < 1) throw std::invalid_argument("multigraph needs at least one vertex");
    if (endpoints.size() > 64) throw std::invalid_argument("edge count above 64 is unsupported");
    edges_.reserve(endpoints.size());
    for (size_t i = 0; i < endpoints.size(); ++i) {
      auto [t, h] = endpoints[i];
      if (t < 0 || t >= n || h < 0 || h >= n) throw std::invalid_argument("edge endpoint out of range");
      edges_.push_back(Edge{static_cast<int>(i), t, h});
    }
  }

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(id); }

  EdgeSubset all_edges() const { return EdgeSubset::full(m()); }

  bool is_connected() const {
    UnionFind uf(n_);
    for (const Edge& e : edges_) uf.unite(e.tail, e.head);
    return uf.components() == 1;
  }

  /// Component partition of the spanning subgraph (V, s).
  VertexPartition components_of(const EdgeSubset& s) const {
    check_subset(s);
    UnionFind uf(n_);
    s.for_each([&](int e) { uf.unite(edges_[e].tail, edges_[e].head); });
    std::vector<int> label(n_);
    for (int v = 0; v < n_; ++v) label[v] = uf.find(v);
    return VertexPartition::from_labels(label);
  }

  bool is_acyclic(const EdgeSubset& s) const {
    check_subset(s);
    UnionFind uf(n_);
    bool ok = true;
    s.for_each([&](int e) {
      if (!uf.unite(edges_[e].tail, edges_[e].head)) ok = false;
    });
    return ok;
  }

  bool is_spanning_tree(const EdgeSubset& s) const {
    return s.size() == n_ - 1 && is_acyclic(s);
  }
  bool is_spanning_2forest(const EdgeSubset& s) const {
    return n_ >= 2 && s.size() == n_ - 2 && is_acyclic(s);
  }

  /// Canonical key: deterministic identity for corpus ordering and dedup.
  std::string key() const {
    std::string s = std::to_string(n_) + ":";
    for (const Edge& e : edges_) s += std::to_string(e.tail) + "-" + std::to_string(e.head) + ";";
    return s;
  }

 private:
  void check_subset(const EdgeSubset& s) const {
    if (s.ambient() != m()) throw std::invalid_argument("edge subset from a different graph");
  }

  int n_;
  std::vector<Edge> edges_;
};

/// m - n + 1, the rank of the cycle space.
inline int genus(const Multigraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  return g.m() - g.n() + 1;
}

/// All spanning trees, lexicographic on ascending edge-id sequences.
/// Disconnected input yields an empty list (callers that need a warning use
/// is_connected()). Self-loops never appear: a loop closes a cycle.
inline std::vector<EdgeSubset> spanning_trees(const Multigraph& g) {
  std::vector<EdgeSubset> out;
  if (!g.is_connected()) return out;
  for_each_ksubset(g.m(), g.n() - 1, [&](const EdgeSubset& s) {
    if (g.is_acyclic(s)) out.push_back(s);
  });
  return out;
}

/// All spanning 2-forests (acyclic, exactly two components), same order.
inline std::vector<EdgeSubset> spanning_2forests(const Multigraph& g) {
  if (g.n() < 2) throw std::invalid_argument("no 2-forest exists");
  std::vector<EdgeSubset> out;
  for_each_ksubset(g.m(), g.n() - 2, [&](const EdgeSubset& s) {
    if (g.is_acyclic(s)) out.push_back(s);
  });
  return out;
}

/// The 2-block partition given by the components of a spanning 2-forest.
inline VertexPartition forest_partition(const Multigraph& g, const EdgeSubset& f) {
  if (!g.is_spanning_2forest(f)) throw std::invalid_argument("edge set is not a spanning 2-forest");
  return g.components_of(f);
}

/// Edges with endpoints in two different blocks of P. Self-loops never cross.
inline EdgeSubset crossing_edges(const Multigraph& g, const VertexPartition& P) {
  if (P.n() != g.n()) throw std::invalid_argument("partition is over a different vertex set");
  EdgeSubset out(g.m());
  for (const Edge& e : g.edges())
    if (!P.same_block(e.tail, e.head)) out = out.with(e.id);
  return out;
}

struct Contraction {
  Multigraph graph;
  std::vector<int> vertex_map;  // old vertex id -> new vertex id, surjective
  std::vector<int> edge_map;    // old edge id -> new edge id, -1 when dropped
};

/// Quotient by the edges in s: endpoints of every edge in s are identified,
/// the edges in s are dropped, all other edges survive (as self-loops when
/// both endpoints land in the same class) and keep their identity through
/// edge_map.
inline Contraction contract(const Multigraph& g, const EdgeSubset& s) {
  if (s.ambient() != g.m()) throw std::invalid_argument("edge subset from a different graph");
  UnionFind uf(g.n());
  s.for_each([&](int e) { uf.unite(g.edge(e).tail, g.edge(e).head); });

  std::vector<int> vmap(g.n(), -1);
  int next = 0;
  for (int v = 0; v < g.n(); ++v) {
    int r = uf.find(v);
    if (vmap[r] == -1) vmap[r] = next++;
    vmap[v] = vmap[r];
  }

  std::vector<std::pair<int, int>> endpoints;
  std::vector<int> emap(g.m(), -1);
  for (const Edge& e : g.edges()) {
    if (s.contains(e.id)) continue;
    emap[e.id] = static_cast<int>(endpoints.size());
    endpoints.emplace_back(vmap[e.tail], vmap[e.head]);
  }
  return Contraction{Multigraph(next, std::move(endpoints)), std::move(vmap), std::move(emap)};
}

}  // namespace symanzik
