#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symanzik/exchange.hpp"
#include "symanzik/homology.hpp"
#include "symanzik/matrix.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/polynomials.hpp"
#include "symanzik/rational.hpp"

namespace symanzik {

inline Rat y_monomial(const std::vector<Rat>& y, const EdgeSubset& s) {
  Rat p(1);
  s.for_each([&](int e) { p *= y.at(e); });
  return p;
}

/// Bounded perturbation of the edge-weight form: base weights y0 > 0, an
/// m x m perturbation A with |A_ij| <= bound, and a strictly increasing
/// positive scale grid. Invertibility at the grid points (condition (ii))
/// is checked where it matters, never assumed.
struct PerturbationSpec {
  std::vector<Rat> y0;
  Matrix A;
  Rat bound;
  std::vector<Rat> grid;

  void validate(const Multigraph& g) const {
    if (static_cast<int>(y0.size()) != g.m()) throw std::invalid_argument("y0 has wrong length");
    for (const Rat& v : y0)
      if (sgn(v) <= 0) throw std::invalid_argument("y0 must be positive");
    if (A.rows() != g.m() || A.cols() != g.m()) throw std::invalid_argument("A must be m x m");
    if (sgn(bound) <= 0) throw std::invalid_argument("bound must be positive");
    for (int i = 0; i < A.rows(); ++i)
      for (int j = 0; j < A.cols(); ++j)
        if (abs(A(i, j)) > bound) throw std::invalid_argument("perturbation entry exceeds the bound");
    if (grid.empty()) throw std::invalid_argument("empty scale grid");
    for (size_t k = 0; k < grid.size(); ++k) {
      if (sgn(grid[k]) <= 0) throw std::invalid_argument("grid scales must be positive");
      if (k > 0 && grid[k] <= grid[k - 1]) throw std::invalid_argument("grid must be strictly increasing");
    }
  }

  std::vector<Rat> scaled_y(const Rat& t) const {
    std::vector<Rat> y(y0.size());
    for (size_t i = 0; i < y0.size(); ++i) y[i] = t * y0[i];
    return y;
  }
};

/// Entrywise-random perturbation in [-bound, bound], denominators <= 16.
/// Deliberately not symmetrized.
inline Matrix random_perturbation(int m, const Rat& bound, Rng& rng) {
  Matrix A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = rng.bounded_rational(bound);
  return A;
}

/// Everything the section-3 machinery reuses for one (graph, momenta) pair:
/// the matrices M, N, the tree/forest lists, and the cached minors
/// det(M_{T^c}), det(N_{F^c}) and forest values q(F). Scalar momenta only.
struct VariationContext {
  Multigraph g;
  MomentumAssignment mom;
  CycleBasis cb;
  Matrix M;
  Matrix N;
  std::vector<EdgeSubset> trees;
  std::vector<EdgeSubset> forests;
  std::map<EdgeSubset, Rat> detM;  // tree -> det(M_{T^c})
  std::map<EdgeSubset, Rat> detN;  // forest -> det(N_{F^c})
  std::map<EdgeSubset, Rat> q;     // forest -> q(F)
};

inline VariationContext make_variation_context(const Multigraph& g, const MomentumAssignment& mom) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  mom.validate(g.n());
  if (mom.D != 1) throw std::invalid_argument("variation requires scalar momenta (D = 1)");
  VariationContext ctx{g, mom, cycle_basis(g), Matrix(), Matrix(), {}, {}, {}, {}, {}};
  ctx.M = ctx.cb.M;
  ctx.N = extended_matrix(ctx.cb, momentum_lift(g, mom.coordinate(0), ctx.cb.tree));
  ctx.trees = spanning_trees(g);
  ctx.forests = spanning_2forests(g);
  for (const EdgeSubset& t : ctx.trees) ctx.detM.emplace(t, det_cols(ctx.M, t.complement()));
  for (const EdgeSubset& f : ctx.forests) {
    ctx.detN.emplace(f, det_cols(ctx.N, f.complement()));
    ctx.q.emplace(f, q_of_forest(g, f, mom));
  }
  return ctx;
}

/// f1 = det(M Y M^T), f2 = det(N Y N^T), each cross-checked against the
/// enumeration sums; a mismatch means a broken build, not bad input.
inline std::pair<Rat, Rat> eval_f(const VariationContext& ctx, const std::vector<Rat>& y) {
  for (const Rat& v : y)
    if (sgn(v) <= 0) throw std::invalid_argument("weights must be positive");
  Matrix Y = Matrix::diagonal(y);
  Rat f1 = det(gram(ctx.M, Y));
  Rat f2 = det(gram(ctx.N, Y));
  Rat s1(0), s2(0);
  for (const EdgeSubset& t : ctx.trees) s1 += y_monomial(y, t.complement());
  for (const EdgeSubset& f : ctx.forests) s2 += ctx.q.at(f) * y_monomial(y, f.complement());
  if (f1 != s1 || f2 != s2) throw std::logic_error("determinant and enumeration routes disagree");
  return {f1, f2};
}

/// g1 = det(M (Y+A) M^T), g2 = det(N (Y+A) N^T) at Y = diag(t * y0).
inline std::pair<Rat, Rat> eval_g(const VariationContext& ctx, const PerturbationSpec& spec, const Rat& t) {
  spec.validate(ctx.g);
  Matrix W = Matrix::diagonal(spec.scaled_y(t)) + spec.A;
  Rat g1 = det(gram(ctx.M, W));
  Rat g2 = det(gram(ctx.N, W));
  if (sgn(g1) == 0 || sgn(g2) == 0)
    throw std::domain_error("condition (ii) violated at t = " + rat_str(t));
  return {g1, g2};
}

/// A vertex of the triple graph: side 1 carries (F1, F2, T), side 2 carries
/// (T1, T2, F). No disjointness is required between the parts.
struct TripleVertex {
  int side = 1;
  EdgeSubset a, b, c;

  bool operator==(const TripleVertex& o) const { return side == o.side && a == o.a && b == o.b && c == o.c; }
  bool operator<(const TripleVertex& o) const {
    if (side != o.side) return side < o.side;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return c < o.c;
  }
  std::string str() const {
    return "(" + a.str() + "," + b.str() + "," + c.str() + ")@" + std::to_string(side);
  }
};

class TripleGraph {
 public:
  TripleGraph(std::vector<TripleVertex> verts, std::vector<std::vector<std::pair<int, int>>> adj,
              std::vector<char> special)
      : verts_(std::move(verts)), adj_(std::move(adj)), special_(std::move(special)) {
    compute_components();
  }

  int num_vertices() const { return static_cast<int>(verts_.size()); }
  const std::vector<TripleVertex>& vertices() const { return verts_; }
  const TripleVertex& vertex(int i) const { return verts_.at(i); }
  const std::vector<std::pair<int, int>>& neighbors(int i) const { return adj_.at(i); }
  bool is_special(int i) const { return special_.at(i) != 0; }
  int component_of(int i) const { return comp_.at(i); }
  int num_components() const { return num_components_; }

  std::vector<int> component_members(int c) const {
    std::vector<int> out;
    for (int i = 0; i < num_vertices(); ++i)
      if (comp_[i] == c) out.push_back(i);
    return out;
  }

  bool component_special_free(int c) const {
    for (int i = 0; i < num_vertices(); ++i)
      if (comp_[i] == c && special_[i]) return false;
    return true;
  }

 private:
  void compute_components() {
    int n = num_vertices();
    UnionFind uf(n == 0 ? 1 : n);
    for (int i = 0; i < n; ++i)
      for (auto [j, e] : adj_[i]) uf.unite(i, j);
    comp_.assign(n, -1);
    num_components_ = 0;
    std::map<int, int> relabel;
    for (int i = 0; i < n; ++i) {
      int r = uf.find(i);
      auto it = relabel.find(r);
      if (it == relabel.end()) it = relabel.emplace(r, num_components_++).first;
      comp_[i] = it->second;
    }
  }

  std::vector<TripleVertex> verts_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<char> special_;
  std::vector<int> comp_;
  int num_components_ = 0;
};

/// Builds the full triple graph with special flags. Side-1 triples are
/// special when their two forests induce different vertex partitions; side-2
/// triples when some edge of the tree symmetric difference (outside F)
/// completes F to a spanning tree.
inline TripleGraph build_triple_graph(const VariationContext& ctx, long budget = 200000) {
  const Multigraph& g = ctx.g;
  long f = static_cast<long>(ctx.forests.size()), t = static_cast<long>(ctx.trees.size());
  long total = f * f * t + t * t * f;
  if (total > budget) throw BudgetExceeded(total, budget);

  std::map<EdgeSubset, VertexPartition> forest_parts;
  std::map<EdgeSubset, EdgeSubset> forest_crossing;
  for (const EdgeSubset& fs : ctx.forests) {
    VertexPartition p = g.components_of(fs);
    forest_crossing.emplace(fs, crossing_edges(g, p));
    forest_parts.emplace(fs, std::move(p));
  }

  std::vector<TripleVertex> verts;
  verts.reserve(static_cast<size_t>(total));
  std::vector<char> special;
  special.reserve(static_cast<size_t>(total));
  for (const EdgeSubset& f1 : ctx.forests)
    for (const EdgeSubset& f2 : ctx.forests)
      for (const EdgeSubset& tr : ctx.trees) {
        verts.push_back(TripleVertex{1, f1, f2, tr});
        special.push_back(forest_parts.at(f1) != forest_parts.at(f2) ? 1 : 0);
      }
  size_t side1 = verts.size();
  for (const EdgeSubset& t1 : ctx.trees)
    for (const EdgeSubset& t2 : ctx.trees)
      for (const EdgeSubset& fs : ctx.forests) {
        verts.push_back(TripleVertex{2, t1, t2, fs});
        EdgeSubset candidates = t1.unite(t2).minus(t1.intersect(t2)).minus(fs).intersect(forest_crossing.at(fs));
        special.push_back(candidates.empty() ? 0 : 1);
      }

  auto index_of = [&](const TripleVertex& v) {
    auto lo = verts.begin() + (v.side == 2 ? static_cast<long>(side1) : 0);
    auto hi = v.side == 2 ? verts.end() : verts.begin() + static_cast<long>(side1);
    auto it = std::lower_bound(lo, hi, v);
    return static_cast<int>(it - verts.begin());
  };

  std::vector<std::vector<std::pair<int, int>>> adj(verts.size());
  for (size_t i = side1; i < verts.size(); ++i) {
    const TripleVertex& v = verts[i];  // (T1, T2, F)
    EdgeSubset pivots = v.a.intersect(v.b).minus(v.c).intersect(forest_crossing.at(v.c));
    pivots.for_each([&](int e) {
      TripleVertex w{1, v.a.without(e), v.b.without(e), v.c.with(e)};
      int j = index_of(w);
      adj[i].push_back({j, e});
      adj[j].push_back({static_cast<int>(i), e});
    });
  }
  return TripleGraph(std::move(verts), std::move(adj), std::move(special));
}

/// q on triple vertices: q(F) on side 2; on side 1 defined only for
/// non-special triples, where q(F1) = q(F2).
inline std::optional<Rat> triple_q(const VariationContext& ctx, const TripleGraph& G, int i) {
  const TripleVertex& v = G.vertex(i);
  if (v.side == 2) return ctx.q.at(v.c);
  if (G.is_special(i)) return std::nullopt;
  const Rat& q1 = ctx.q.at(v.a);
  if (q1 != ctx.q.at(v.b)) throw std::logic_error("vertex-equivalent forests with different q");
  return q1;
}

/// The two weights of section-3: xi is the mixed (Y+A)-minor times the
/// complementary monomial, zeta multiplies in the exact minor data.
inline std::pair<Rat, Rat> xi_zeta(const VariationContext& ctx, const TripleVertex& v,
                                   const PerturbationSpec& spec, const Rat& t) {
  std::vector<Rat> y = spec.scaled_y(t);
  Matrix W = Matrix::diagonal(y) + spec.A;
  if (v.side == 1) {
    Rat xi = minor_det(W, v.a.complement(), v.b.complement()) * y_monomial(y, v.c.complement());
    Rat zeta = ctx.detN.at(v.a) * ctx.detN.at(v.b) * xi;
    return {xi, zeta};
  }
  Rat xi = minor_det(W, v.a.complement(), v.b.complement()) * y_monomial(y, v.c.complement());
  Rat zeta = ctx.detM.at(v.a) * ctx.detM.at(v.b) * ctx.q.at(v.c) * xi;
  return {xi, zeta};
}

struct WeightIdentityReport {
  Rat side1_sum, g2f1;  // sum over V1 of zeta vs g2 * f1
  Rat side2_sum, g1f2;  // sum over V2 of zeta vs g1 * f2
  bool side1_ok = false;
  bool side2_ok = false;
  bool all_ok() const { return side1_ok && side2_ok; }
};

/// The exact identities sum_{V1} zeta = g2 f1 and sum_{V2} zeta = g1 f2.
/// The left sides run over all triples using minors, the right sides are
/// full-determinant products, so the two routes are independent.
inline WeightIdentityReport weight_identities(const VariationContext& ctx, const PerturbationSpec& spec,
                                              const Rat& t) {
  spec.validate(ctx.g);
  std::vector<Rat> y = spec.scaled_y(t);
  Matrix Y = Matrix::diagonal(y);
  Matrix W = Y + spec.A;

  std::vector<Rat> tree_mono(ctx.trees.size()), forest_mono(ctx.forests.size());
  for (size_t i = 0; i < ctx.trees.size(); ++i) tree_mono[i] = y_monomial(y, ctx.trees[i].complement());
  for (size_t i = 0; i < ctx.forests.size(); ++i) forest_mono[i] = y_monomial(y, ctx.forests[i].complement());

  WeightIdentityReport r;
  r.side1_sum = 0;
  for (const EdgeSubset& f1 : ctx.forests)
    for (const EdgeSubset& f2 : ctx.forests) {
      Rat pair_term = ctx.detN.at(f1) * ctx.detN.at(f2);
      if (sgn(pair_term) == 0) continue;
      pair_term *= minor_det(W, f1.complement(), f2.complement());
      if (sgn(pair_term) == 0) continue;
      for (size_t ti = 0; ti < ctx.trees.size(); ++ti) r.side1_sum += pair_term * tree_mono[ti];
    }
  r.side2_sum = 0;
  for (const EdgeSubset& t1 : ctx.trees)
    for (const EdgeSubset& t2 : ctx.trees) {
      Rat pair_term = ctx.detM.at(t1) * ctx.detM.at(t2);
      if (sgn(pair_term) == 0) continue;
      pair_term *= minor_det(W, t1.complement(), t2.complement());
      if (sgn(pair_term) == 0) continue;
      for (size_t fi = 0; fi < ctx.forests.size(); ++fi)
        r.side2_sum += pair_term * ctx.q.at(ctx.forests[fi]) * forest_mono[fi];
    }

  Rat f1v = det(gram(ctx.M, Y)), f2v = det(gram(ctx.N, Y));
  Rat g1v = det(gram(ctx.M, W)), g2v = det(gram(ctx.N, W));
  r.g2f1 = g2v * f1v;
  r.g1f2 = g1v * f2v;
  r.side1_ok = (r.side1_sum == r.g2f1);
  r.side2_ok = (r.side2_sum == r.g1f2);
  return r;
}

struct ComponentBalance {
  int component = 0;
  bool special_free = false;
  Rat q_side1, q_side2;
  bool balanced = false;       // exact, asserted for special-free components
  bool zeta_ratio_known = false;
  Rat zeta_ratio_spread;       // max |zeta - q * zeta_ref| / f1^2, reported only
};

struct QBalanceReport {
  std::vector<ComponentBalance> components;
  bool all_ok() const {
    for (const auto& c : components)
      if (c.special_free && !c.balanced) return false;
    return true;
  }
};

/// Exact q-balance over every special-free component; when a perturbation
/// and scale are supplied, also reports the zeta/q constancy spread (the
/// O(f1^2) remainder term), without asserting it.
inline QBalanceReport q_balance_check(const VariationContext& ctx, const TripleGraph& G,
                                      const PerturbationSpec* spec = nullptr, const Rat* t = nullptr) {
  QBalanceReport rep;
  for (int c = 0; c < G.num_components(); ++c) {
    ComponentBalance cb;
    cb.component = c;
    cb.special_free = G.component_special_free(c);
    cb.q_side1 = 0;
    cb.q_side2 = 0;
    std::vector<int> members = G.component_members(c);
    if (cb.special_free) {
      for (int i : members) {
        Rat qv = *triple_q(ctx, G, i);
        (G.vertex(i).side == 1 ? cb.q_side1 : cb.q_side2) += qv;
      }
      cb.balanced = (cb.q_side1 == cb.q_side2);
      if (spec && t) {
        Rat f1 = det(gram(ctx.M, Matrix::diagonal(spec->scaled_y(*t))));
        std::optional<Rat> ref;
        std::vector<std::pair<Rat, Rat>> qz;  // (q, zeta)
        for (int i : members) {
          Rat qv = *triple_q(ctx, G, i);
          Rat zeta = xi_zeta(ctx, G.vertex(i), *spec, *t).second;
          if (!ref && sgn(qv) != 0) ref = zeta / qv;
          qz.emplace_back(qv, zeta);
        }
        if (ref && sgn(f1) != 0) {
          Rat spread(0);
          for (const auto& [qv, zeta] : qz) {
            Rat dev = abs(zeta - qv * *ref);
            if (dev > spread) spread = dev;
          }
          cb.zeta_ratio_spread = spread / (f1 * f1);
          cb.zeta_ratio_known = true;
        }
      }
    }
    rep.components.push_back(std::move(cb));
  }
  return rep;
}

struct ProjectionIsoReport {
  bool relations_agree = false;    // the three equivalence relations coincide
  bool constant_trees_ok = false;  // induced trees per class are member-independent
  bool stable_edges_ok = false;    // crossing edges of T1 and T2 agree (and of F1, F2)
  bool multiset_ok = false;        // E_12 and E_3 stay disjoint with a member-free union
  bool quotient_connected = false;
  bool bijective = false;
  bool adjacency_ok = false;
  std::string detail;
  bool all_ok() const {
    return relations_agree && constant_trees_ok && stable_edges_ok && multiset_ok && quotient_connected &&
           bijective && adjacency_ok;
  }
};

/// Verifies that the projection onto the exchange graph of the contracted
/// multigraph is a graph isomorphism on a special-free component.
inline ProjectionIsoReport projection_iso_check(const VariationContext& ctx, const TripleGraph& G, int comp,
                                                long budget = 200000) {
  const Multigraph& g = ctx.g;
  if (!G.component_special_free(comp)) throw std::invalid_argument("component contains a special vertex");
  std::vector<int> members = G.component_members(comp);
  if (members.empty()) throw std::invalid_argument("empty component");
  ProjectionIsoReport rep;

  auto whole = VertexPartition(g.n(), {[&] {
                                 std::vector<int> all(g.n());
                                 for (int v = 0; v < g.n(); ++v) all[v] = v;
                                 return all;
                               }()});
  VertexPartition eq1 = whole, eq2 = whole, eq3 = whole;
  for (int i : members) {
    const TripleVertex& v = G.vertex(i);
    if (v.side == 2) {
      eq1 = eq1.refine(detail::tree_minus_crossing(g, v.a, v.c));
      eq2 = eq2.refine(detail::tree_minus_crossing(g, v.b, v.c));
    } else {
      eq3 = eq3.refine(detail::tree_minus_crossing(g, v.c, v.a));
    }
  }
  rep.relations_agree = (eq1 == eq2 && eq2 == eq3);
  if (!rep.relations_agree) {
    rep.detail = "equivalence relations differ: " + eq1.str() + " vs " + eq2.str() + " vs " + eq3.str();
    return rep;
  }
  const VertexPartition& classes = eq1;
  EdgeSubset class_crossing = crossing_edges(g, classes);

  // Constant induced trees per class, across all members and all three slots.
  rep.constant_trees_ok = true;
  std::vector<std::array<std::optional<EdgeSubset>, 3>> tau(classes.num_blocks());
  for (int i : members) {
    const TripleVertex& v = G.vertex(i);
    for (int bi = 0; bi < classes.num_blocks() && rep.constant_trees_ok; ++bi) {
      const auto& block = classes.block(bi);
      EdgeSubset t1 = detail::induced_edges(g, v.a, block);
      EdgeSubset t2 = detail::induced_edges(g, v.b, block);
      EdgeSubset t3 = detail::induced_edges(g, v.c, block);
      for (int s = 0; s < 3; ++s) {
        const EdgeSubset& have = s == 0 ? t1 : (s == 1 ? t2 : t3);
        if (!tau[bi][s])
          tau[bi][s] = have;
        else if (*tau[bi][s] != have) {
          rep.constant_trees_ok = false;
          rep.detail = "induced tree changes across members at " + v.str();
        }
      }
    }
  }
  if (!rep.constant_trees_ok) return rep;

  // Crossing parts of the two trees (or the two forests) must agree.
  rep.stable_edges_ok = true;
  std::optional<EdgeSubset> e12, e3;
  for (int i : members) {
    const TripleVertex& v = G.vertex(i);
    EdgeSubset a_cross = v.a.intersect(class_crossing);
    EdgeSubset b_cross = v.b.intersect(class_crossing);
    EdgeSubset c_cross = v.c.intersect(class_crossing);
    if (a_cross != b_cross) {
      rep.stable_edges_ok = false;
      rep.detail = "crossing edges of the paired parts differ at " + v.str();
      return rep;
    }
    EdgeSubset u = a_cross.unite(c_cross);
    if (!a_cross.disjoint(c_cross)) {
      rep.multiset_ok = false;
      rep.detail = "an edge occurs in both halves of the quotient edge set at " + v.str();
      return rep;
    }
    if (!e12) {
      e12 = a_cross;
      e3 = c_cross;
    }
    if ((e12->unite(*e3)) != u) {
      rep.multiset_ok = false;
      rep.detail = "quotient edge set depends on the member at " + v.str();
      return rep;
    }
  }
  rep.multiset_ok = true;

  // Quotient multigraph on the classes, edges = the stable crossing set.
  EdgeSubset eg = e12->unite(*e3);
  std::vector<int> eg_ids = eg.ids();
  std::vector<int> down(g.m(), -1);
  std::vector<std::pair<int, int>> endpoints;
  for (size_t i = 0; i < eg_ids.size(); ++i) {
    down[eg_ids[i]] = static_cast<int>(i);
    endpoints.emplace_back(classes.block_of(g.edge(eg_ids[i]).tail), classes.block_of(g.edge(eg_ids[i]).head));
  }
  Multigraph g0(classes.num_blocks(), std::move(endpoints));
  ExchangeGraph H0 = build_exchange_graph(g0, budget);
  rep.quotient_connected = (H0.num_components() == 1 && H0.num_vertices() > 0);
  if (!rep.quotient_connected) {
    rep.detail = "exchange graph of the quotient is not connected";
    return rep;
  }

  auto push_down = [&](const EdgeSubset& s) {
    EdgeSubset out(g0.m());
    s.for_each([&](int e) {
      if (down[e] >= 0) out = out.with(down[e]);
    });
    return out;
  };

  std::vector<int> image(G.num_vertices(), -1);
  std::vector<char> hit(H0.num_vertices(), 0);
  rep.bijective = true;
  for (int i : members) {
    const TripleVertex& v = G.vertex(i);
    ExchangeVertex w;
    if (v.side == 2)
      w = ExchangeVertex{2, push_down(v.a.intersect(class_crossing)), push_down(v.c.intersect(class_crossing))};
    else
      w = ExchangeVertex{1, push_down(v.a.intersect(class_crossing)), push_down(v.c.intersect(class_crossing))};
    int j = H0.find(w);
    if (j < 0 || hit[j]) {
      rep.bijective = false;
      rep.detail = "projection fails to be injective onto the quotient at " + v.str();
      return rep;
    }
    hit[j] = 1;
    image[i] = j;
  }
  if (static_cast<int>(members.size()) != H0.num_vertices()) {
    rep.bijective = false;
    rep.detail = "projection misses vertices of the quotient exchange graph";
    return rep;
  }

  rep.adjacency_ok = true;
  for (int i : members) {
    std::vector<int> a, b;
    for (auto [j, e] : G.neighbors(i)) a.push_back(image[j]);
    for (auto [j, e] : H0.neighbors(image[i])) b.push_back(j);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      rep.adjacency_ok = false;
      rep.detail = "projection does not preserve adjacency at " + G.vertex(i).str();
      return rep;
    }
  }
  return rep;
}

struct SweepRow {
  Rat t;
  Rat f1, f2;
  bool singular = false;  // condition (ii) failed at this scale
  Rat g1, g2;
  Rat delta;        // g2/g1 - f2/f1
  Rat g1_over_f1;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool any_singular = false;
  Rat tail_range;       // max - min of delta over t >= t2
  Rat delta_at_tmax;
  std::vector<Rat> tail_diffs;  // |delta_{k+1} - delta_k| over the tail
  bool diffs_nonincreasing = false;
  bool range_ok = false;
  Rat c1, c2;           // min and max of g1/f1 over the tail
  bool pass = false;
};

/// Scales y0 along the grid and tracks Delta(t) = g2/g1 - f2/f1 exactly.
/// PASS means: no singular scale, the successive |Delta| differences are
/// non-increasing on the tail (t >= second grid point), and the tail range
/// is at most factor * (1 + |Delta(t_max)|).
inline SweepReport boundedness_sweep(const VariationContext& ctx, const PerturbationSpec& spec,
                                     const Rat& factor = Rat(1)) {
  spec.validate(ctx.g);
  SweepReport rep;
  for (const Rat& t : spec.grid) {
    SweepRow row;
    row.t = t;
    auto [f1, f2] = eval_f(ctx, spec.scaled_y(t));
    row.f1 = f1;
    row.f2 = f2;
    try {
      auto [g1, g2] = eval_g(ctx, spec, t);
      row.g1 = g1;
      row.g2 = g2;
      row.delta = g2 / g1 - f2 / f1;
      row.g1_over_f1 = g1 / f1;
    } catch (const std::domain_error&) {
      row.singular = true;
      rep.any_singular = true;
    }
    rep.rows.push_back(std::move(row));
  }

  std::vector<const SweepRow*> tail;
  for (size_t k = 1; k < rep.rows.size(); ++k)
    if (!rep.rows[k].singular) tail.push_back(&rep.rows[k]);
  if (!tail.empty()) {
    Rat lo = tail.front()->delta, hi = tail.front()->delta;
    rep.c1 = tail.front()->g1_over_f1;
    rep.c2 = rep.c1;
    for (const SweepRow* r : tail) {
      lo = std::min(lo, r->delta);
      hi = std::max(hi, r->delta);
      rep.c1 = std::min(rep.c1, r->g1_over_f1);
      rep.c2 = std::max(rep.c2, r->g1_over_f1);
    }
    rep.tail_range = hi - lo;
    rep.delta_at_tmax = tail.back()->delta;
    for (size_t k = 0; k + 1 < tail.size(); ++k)
      rep.tail_diffs.push_back(abs(tail[k + 1]->delta - tail[k]->delta));
    rep.diffs_nonincreasing = true;
    for (size_t k = 0; k + 1 < rep.tail_diffs.size(); ++k)
      if (rep.tail_diffs[k + 1] > rep.tail_diffs[k]) rep.diffs_nonincreasing = false;
    rep.range_ok = rep.tail_range <= factor * (Rat(1) + abs(rep.delta_at_tmax));
  }
  rep.pass = !rep.any_singular && rep.diffs_nonincreasing && rep.range_ok && !tail.empty();
  return rep;
}

inline std::string sweep_to_csv(const SweepReport& rep) {
  std::string s = "t,f1,f2,g1,g2,Delta,g1_over_f1\n";
  for (const SweepRow& r : rep.rows) {
    s += rat_str(r.t) + "," + rat_str(r.f1) + "," + rat_str(r.f2) + ",";
    if (r.singular)
      s += "singular,singular,singular,singular\n";
    else
      s += rat_str(r.g1) + "," + rat_str(r.g2) + "," + rat_str(r.delta) + "," + rat_str(r.g1_over_f1) + "\n";
  }
  return s;
}

/// Grid diagnostics for the light-weight claims: the normalized sequence,
/// whether |value| is non-increasing on the tail, whether the successive
/// differences shrink, and the tail bound against 1 + |last|.
struct GridSequenceReport {
  std::vector<Rat> values;  // one per grid point
  bool abs_nonincreasing_tail = false;
  bool diffs_nonincreasing_tail = false;
  bool tail_bounded = false;
};

inline GridSequenceReport analyze_grid_sequence(std::vector<Rat> values) {
  GridSequenceReport r;
  r.values = std::move(values);
  if (r.values.size() < 2) {
    r.abs_nonincreasing_tail = r.diffs_nonincreasing_tail = r.tail_bounded = true;
    return r;
  }
  std::vector<Rat> tail(r.values.begin() + 1, r.values.end());
  r.abs_nonincreasing_tail = true;
  for (size_t k = 0; k + 1 < tail.size(); ++k)
    if (abs(tail[k + 1]) > abs(tail[k])) r.abs_nonincreasing_tail = false;
  std::vector<Rat> diffs;
  for (size_t k = 0; k + 1 < tail.size(); ++k) diffs.push_back(abs(tail[k + 1] - tail[k]));
  r.diffs_nonincreasing_tail = true;
  for (size_t k = 0; k + 1 < diffs.size(); ++k)
    if (diffs[k + 1] > diffs[k]) r.diffs_nonincreasing_tail = false;
  Rat cap = Rat(1) + abs(tail.back());
  r.tail_bounded = true;
  for (const Rat& v : tail)
    if (abs(v) > cap) r.tail_bounded = false;
  return r;
}

/// xi(w)/f1^2 along the grid for one vertex (used for the special-vertex
/// lightness and adjacent-difference checks).
inline GridSequenceReport xi_over_f1sq_sequence(const VariationContext& ctx, const TripleVertex& v,
                                                const PerturbationSpec& spec) {
  std::vector<Rat> vals;
  for (const Rat& t : spec.grid) {
    std::vector<Rat> y = spec.scaled_y(t);
    Rat f1 = det(gram(ctx.M, Matrix::diagonal(y)));
    vals.push_back(xi_zeta(ctx, v, spec, t).first / (f1 * f1));
  }
  return analyze_grid_sequence(std::move(vals));
}

}  // namespace symanzik
