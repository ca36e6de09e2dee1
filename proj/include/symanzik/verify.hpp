#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "symanzik/corpus.hpp"
#include "symanzik/exchange.hpp"
#include "symanzik/homology.hpp"
#include "symanzik/matrix.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/polynomials.hpp"
#include "symanzik/rational.hpp"
#include "symanzik/variation.hpp"

namespace symanzik {

struct PropertyResult {
  std::string name;
  long checked = 0;
  long failures = 0;
  std::string first_failure;
};

class PropertyLedger {
 public:
  void check(const std::string& name, bool ok, const std::string& context) {
    PropertyResult& r = slot(name);
    ++r.checked;
    if (!ok) {
      ++r.failures;
      if (r.first_failure.empty()) r.first_failure = context;
    }
  }

  const std::vector<PropertyResult>& results() const { return results_; }
  bool all_ok() const {
    for (const auto& r : results_)
      if (r.failures != 0) return false;
    return true;
  }

 private:
  PropertyResult& slot(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_.emplace(name, results_.size());
      results_.push_back(PropertyResult{name, 0, 0, ""});
      return results_.back();
    }
    return results_[it->second];
  }

  std::vector<PropertyResult> results_;
  std::map<std::string, size_t> index_;
};

struct VerifyOptions {
  CorpusOptions corpus;
  int y_samples = 50;            // random weight vectors per graph for the oracle equalities
  long exchange_budget = 200000;
  long triple_budget = 60000;
  int sec3_instances = 50;       // seeded (graph, momenta, y0, A, t) instances
  int sweep_instances = 20;
  int matrix_instances = 100;
  std::uint64_t seed = 20160702;
};

namespace verify_detail {

inline std::vector<Rat> random_positive_y(int m, Rng& rng) {
  std::vector<Rat> y(m);
  for (int i = 0; i < m; ++i) y[i] = rng.positive_rational();
  return y;
}

/// Conserved scalar momenta with small entries; the last vertex absorbs the sum.
inline std::vector<Rat> random_conserved(int n, Rng& rng) {
  std::vector<Rat> p(n, Rat(0));
  Rat total(0);
  for (int v = 0; v + 1 < n; ++v) {
    p[v] = make_rat(rng.irange(-6, 6), rng.irange(1, 4));
    total += p[v];
  }
  p[n - 1] = -total;
  return p;
}

inline Rat eval_poly_at(const SymanzikPolynomial& poly, const std::vector<Rat>& y) { return poly.eval(y); }

}  // namespace verify_detail

/// Enumeration, partition and subgraph invariants of one graph.
inline void verify_multigraph_suite(const Multigraph& g, PropertyLedger& led) {
  std::vector<EdgeSubset> trees = spanning_trees(g);
  std::vector<EdgeSubset> forests = g.n() >= 2 ? spanning_2forests(g) : std::vector<EdgeSubset>{};
  const std::string where = " [" + g.key() + "]";

  bool shapes = true;
  for (const EdgeSubset& t : trees) {
    VertexPartition p = g.components_of(t);
    shapes &= t.size() == g.n() - 1 && g.is_acyclic(t) && p.num_blocks() == 1;
  }
  for (const EdgeSubset& f : forests) {
    VertexPartition p = g.components_of(f);
    shapes &= f.size() == g.n() - 2 && g.is_acyclic(f) && p.num_blocks() == 2;
  }
  led.check("trees/forests well-formed", shapes, "shape violation" + where);

  // Kirchhoff via the reduced Laplacian built from the boundary matrix.
  Matrix d = boundary_matrix(g);
  Matrix L = d * d.transpose();
  std::vector<int> keep;
  for (int v = 1; v < g.n(); ++v) keep.push_back(v);
  Rat tree_count = det(L.submatrix(keep, keep));
  led.check("tree count = reduced Laplacian det", tree_count == Rat(static_cast<long>(trees.size())),
            "count " + std::to_string(trees.size()) + " vs det " + rat_str(tree_count) + where);

  bool crossing_ok = true;
  for (const EdgeSubset& f : forests)
    crossing_ok &= crossing_edges(g, forest_partition(g, f)).intersect(f).empty();
  led.check("crossing edges avoid the forest", crossing_ok, "crossing edge inside forest" + where);

  if (g.n() >= 2) {
    std::set<std::uint64_t> from_trees;
    for (const EdgeSubset& t : trees) t.for_each([&](int e) { from_trees.insert(t.without(e).bits()); });
    std::set<std::uint64_t> listed;
    for (const EdgeSubset& f : forests) listed.insert(f.bits());
    led.check("2-forests = deduplicated tree minus edge", from_trees == listed, "forest set mismatch" + where);
  }
}

/// Exact linear algebra invariants tied to one graph.
inline void verify_homology_suite(const Multigraph& g, PropertyLedger& led, Rng& rng) {
  const std::string where = " [" + g.key() + "]";
  CycleBasis B = cycle_basis(g);
  Matrix d = boundary_matrix(g);
  Matrix prod = d * B.M.transpose();
  bool in_kernel = true;
  for (int i = 0; i < prod.rows(); ++i)
    for (int j = 0; j < prod.cols(); ++j) in_kernel &= sgn(prod(i, j)) == 0;
  led.check("cycle rows lie in ker(boundary)", in_kernel, "boundary * M^T != 0" + where);

  std::vector<EdgeSubset> trees = spanning_trees(g);
  Rat kirchhoff = det(gram(B.M, Matrix::identity(g.m())));
  led.check("det(M M^T) counts spanning trees", kirchhoff == Rat(static_cast<long>(trees.size())),
            rat_str(kirchhoff) + " vs " + std::to_string(trees.size()) + where);

  // Basis invariance: expansions from two different spanning trees coincide.
  if (trees.size() >= 2) {
    CycleBasis B2 = cycle_basis(g, trees.back());
    bool same = cauchy_binet_expand(B.M, Matrix::identity(g.m())) == cauchy_binet_expand(B2.M, Matrix::identity(g.m()));
    led.check("cycle-basis invariance of the expansion", same, "expansions differ" + where);
  }

  // Cauchy-Binet reproduces the Gram determinant at random weights.
  auto expansion = cauchy_binet_expand(B.M, Matrix::identity(g.m()));
  for (int k = 0; k < 50; ++k) {
    std::vector<Rat> y = verify_detail::random_positive_y(g.m(), rng);
    Rat direct = det(gram(B.M, Matrix::diagonal(y)));
    Rat summed(0);
    for (const auto& [I, c] : expansion) summed += c * y_monomial(y, I);
    led.check("Cauchy-Binet expansion matches det", direct == summed, "mismatch" + where);
  }
}

/// Oracle equalities and minor identities for the two Symanzik polynomials.
inline void verify_symanzik_suite(const Multigraph& g, PropertyLedger& led, Rng& rng, int y_samples) {
  if (g.n() < 2) return;
  const std::string where = " [" + g.key() + "]";
  MomentumAssignment mom = MomentumAssignment::scalar(verify_detail::random_conserved(g.n(), rng));
  SymanzikPolynomial psi = psi_enum(g);
  SymanzikPolynomial phi = phi_enum(g, mom);

  for (int k = 0; k < y_samples; ++k) {
    std::vector<Rat> y = verify_detail::random_positive_y(g.m(), rng);
    led.check("psi_det = psi_enum", psi_det(g, y) == psi.eval(y), "psi routes disagree" + where);
    led.check("phi_det = phi_enum", phi_det(g, mom, y) == phi.eval(y), "phi routes disagree" + where);
  }

  CycleBasis B = cycle_basis(g);
  Matrix N = extended_matrix(B, momentum_lift(g, mom.coordinate(0), B.tree));
  std::vector<EdgeSubset> trees = spanning_trees(g);
  std::vector<EdgeSubset> forests = spanning_2forests(g);
  for (const EdgeSubset& t : trees) {
    Rat dm = det_cols(B.M, t.complement());
    led.check("det(M_{T^c})^2 = 1", dm * dm == Rat(1), "tree minor " + rat_str(dm) + where);
  }
  std::map<EdgeSubset, Rat> detN;
  for (const EdgeSubset& f : forests) {
    Rat dn = det_cols(N, f.complement());
    detN.emplace(f, dn);
    led.check("det(N_{F^c})^2 = q(F)", dn * dn == q_of_forest(g, f, mom), "forest minor mismatch" + where);
  }

  // Vertex-equivalent forest pairs with a common completing edge.
  std::map<std::string, std::vector<EdgeSubset>> by_partition;
  for (const EdgeSubset& f : forests) by_partition[forest_partition(g, f).str()].push_back(f);
  for (const auto& entry : by_partition) {
    const std::vector<EdgeSubset>& group = entry.second;
    if (group.size() < 2) continue;
    EdgeSubset crossing = crossing_edges(g, forest_partition(g, group.front()));
    for (size_t i = 0; i < group.size(); ++i)
      for (size_t j = i + 1; j < group.size(); ++j) {
        EdgeSubset candidates = crossing.minus(group[i]).minus(group[j]);
        candidates.for_each([&](int e) {
          EdgeSubset t1 = group[i].with(e), t2 = group[j].with(e);
          if (!g.is_spanning_tree(t1) || !g.is_spanning_tree(t2)) return;
          Rat lhs = detN.at(group[i]) * detN.at(group[j]);
          Rat rhs = paired_minor_sign(group[i], group[j], e) * q_of_forest(g, group[i], mom) *
                    det_cols(B.M, t1.complement()) * det_cols(B.M, t2.complement());
          led.check("paired forest minors identity", lhs == rhs, "pair identity fails" + where);
        });
      }
  }

  // The determinant route must not depend on the chosen lift.
  {
    std::vector<Rat> y = verify_detail::random_positive_y(g.m(), rng);
    Matrix Y = Matrix::diagonal(y);
    Rat base = det(gram(N, Y));
    if (trees.size() >= 2) {
      Matrix N2 = extended_matrix(B, momentum_lift(g, mom.coordinate(0), trees.back()));
      led.check("lift independence", det(gram(N2, Y)) == base, "different tree lift changes phi" + where);
    }
    if (B.M.rows() > 0) {
      Matrix N3 = N;
      Rat c = make_rat(rng.irange(-5, 5), rng.irange(1, 3));
      for (int j = 0; j < g.m(); ++j) N3(N.rows() - 1, j) += c * B.M(0, j);
      led.check("lift independence", det(gram(N3, Y)) == base, "cycle-shifted lift changes phi" + where);
    }
  }

  // Homogeneity in the edge weights.
  {
    std::vector<Rat> y = verify_detail::random_positive_y(g.m(), rng);
    Rat t = rng.positive_rational(12, 5);
    std::vector<Rat> ty(y);
    for (Rat& v : ty) v *= t;
    Rat th(1), th1(1);
    for (int k = 0; k < genus(g); ++k) th *= t;
    th1 = th * t;
    led.check("homogeneity", psi_det(g, ty) == th * psi_det(g, y) && phi_det(g, mom, ty) == th1 * phi_det(g, mom, y),
              "scaling degree mismatch" + where);
  }
}

/// A Minkowski-form check of the polarization route on small graphs.
inline void verify_minkowski_suite(const Multigraph& g, PropertyLedger& led, Rng& rng) {
  if (g.n() < 2 || g.n() > 4 || g.m() > 6) return;
  const std::string where = " [" + g.key() + "]";
  MomentumAssignment mom;
  mom.D = 2;
  mom.form = Matrix::identity(2);
  mom.form(1, 1) = -1;
  mom.p.assign(g.n(), std::vector<Rat>(2, Rat(0)));
  for (int a = 0; a < 2; ++a) {
    std::vector<Rat> coord = verify_detail::random_conserved(g.n(), rng);
    for (int v = 0; v < g.n(); ++v) mom.p[v][a] = coord[v];
  }
  SymanzikPolynomial phi = phi_enum(g, mom);
  for (int k = 0; k < 5; ++k) {
    std::vector<Rat> y = verify_detail::random_positive_y(g.m(), rng);
    led.check("phi_det = phi_enum (Minkowski, D=2)", phi_det(g, mom, y) == phi.eval(y), "mismatch" + where);
  }
}

/// Exchange graph classification invariants.
inline void verify_exchange_suite(const Multigraph& g, PropertyLedger& led, long budget) {
  if (g.n() < 2) return;
  const std::string where = " [" + g.key() + "]";
  ThmConnReport rep = verify_thm_conn(g, budget);
  if (!rep.within_budget) {
    led.check("exchange graphs within budget", true, "");  // recorded, not a failure
    return;
  }
  led.check("thm 2.10 part (1)", rep.part1_ok, rep.first_mismatch + where);
  led.check("thm 2.10 part (2)", rep.part2_ok, rep.first_mismatch + where);
  led.check("equivalence partitions consistent", rep.equiv_ok, rep.first_mismatch + where);
  led.check("pivots cross saturated blocks", rep.pivot_blocks_ok, rep.first_mismatch + where);

  ExchangeGraph H = build_exchange_graph(g, budget);
  bool no_isolated = true;
  for (int i = 0; i < H.num_vertices(); ++i) no_isolated &= !H.neighbors(i).empty();
  led.check("no isolated exchange vertices", no_isolated, "isolated vertex" + where);

  bool unions_constant = true;
  for (int c = 0; c < H.num_components(); ++c) {
    std::vector<int> members = H.component_members(c);
    EdgeSubset u = H.vertex(members.front()).first.unite(H.vertex(members.front()).second);
    for (int i : members) unions_constant &= H.vertex(i).first.unite(H.vertex(i).second) == u;
  }
  led.check("edge union constant per component", unions_constant, "union varies" + where);

  for (int c = 0; c < H.num_components(); ++c)
    led.check("contraction collapses components", contraction_consistency_holds(g, H, c, budget),
              "component " + std::to_string(c) + where);
}

/// One seeded section-3 instance: the exact weight identities plus the
/// q-balance and projection checks over the triple graph.
inline void verify_variation_instance(const Multigraph& g, PropertyLedger& led, Rng& rng, long triple_budget) {
  const std::string where = " [" + g.key() + "]";
  MomentumAssignment mom = MomentumAssignment::scalar(verify_detail::random_conserved(g.n(), rng));
  VariationContext ctx = make_variation_context(g, mom);

  PerturbationSpec spec;
  spec.bound = 1;
  spec.y0 = verify_detail::random_positive_y(g.m(), rng);
  spec.A = random_perturbation(g.m(), spec.bound, rng);
  for (int k = 1; k <= 6; ++k) {
    Rat t(1);
    for (int i = 0; i < k; ++i) t *= 10;
    spec.grid.push_back(t);
  }
  spec.validate(g);

  Rat t = spec.grid[rng.below(spec.grid.size())];
  WeightIdentityReport wi = weight_identities(ctx, spec, t);
  led.check("weight identity sum(zeta|V1) = g2*f1", wi.side1_ok,
            rat_str(wi.side1_sum) + " vs " + rat_str(wi.g2f1) + where);
  led.check("weight identity sum(zeta|V2) = g1*f2", wi.side2_ok,
            rat_str(wi.side2_sum) + " vs " + rat_str(wi.g1f2) + where);

  TripleGraph G = build_triple_graph(ctx, triple_budget);
  QBalanceReport qb = q_balance_check(ctx, G, &spec, &t);
  for (const auto& c : qb.components)
    if (c.special_free)
      led.check("q-balance on special-free components", c.balanced,
                "component " + std::to_string(c.component) + where);
  for (int c = 0; c < G.num_components(); ++c)
    if (G.component_special_free(c))
      led.check("projection isomorphism", projection_iso_check(ctx, G, c).all_ok(),
                "component " + std::to_string(c) + where);
}

/// Pure random-matrix identities (block inverses and the bordered ratio).
inline void verify_matrix_suite(PropertyLedger& led, Rng& rng, int instances) {
  for (int k = 0; k < instances; ++k) {
    int n = static_cast<int>(rng.below(5)) + 1;
    Matrix Mb(n, n), W(n, 1);
    Rat S = make_rat(rng.irange(-9, 9), rng.irange(1, 4));
    for (;;) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Mb(i, j) = make_rat(rng.irange(-9, 9), rng.irange(1, 4));
      if (sgn(det(Mb)) != 0) break;
    }
    for (int i = 0; i < n; ++i) W(i, 0) = make_rat(rng.irange(-9, 9), rng.irange(1, 4));
    Matrix T(n + 1, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = Mb(i, j);
    for (int i = 0; i < n; ++i) {
      T(i, n) = W(i, 0);
      T(n, i) = W(i, 0);
    }
    T(n, n) = S;
    led.check("schur ratio = det(T)/det(M)", schur_ratio(Mb, W, S) * det(Mb) == det(T), "instance " + std::to_string(k));
  }

  for (int k = 0; k < instances; ++k) {
    int p = static_cast<int>(rng.below(3)) + 1;
    int q = static_cast<int>(rng.below(3)) + 1;
    Matrix M11(p, p), M12(p, q), M21(q, p), M22(q, q);
    for (;;) {
      auto fill = [&](Matrix& X) {
        for (int i = 0; i < X.rows(); ++i)
          for (int j = 0; j < X.cols(); ++j) X(i, j) = make_rat(rng.irange(-9, 9), rng.irange(1, 4));
      };
      fill(M11);
      fill(M12);
      fill(M21);
      fill(M22);
      try {
        led.check("block inverse identities", block_inverse_identities(M11, M12, M21, M22).all_ok(),
                  "instance " + std::to_string(k));
        break;
      } catch (const std::domain_error&) {
        continue;  // resample until all required blocks are invertible
      }
    }
  }
}

}  // namespace symanzik
