#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "symanzik/homology.hpp"
#include "symanzik/matrix.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/rational.hpp"

namespace symanzik {

/// Per-vertex external momenta in dimension D, paired by a symmetric bilinear
/// form (identity by default; Minkowski signatures are accepted). The
/// coordinate sums must vanish ("conservation").
struct MomentumAssignment {
  int D = 1;
  Matrix form;                       // D x D symmetric
  std::vector<std::vector<Rat>> p;   // n x D

  static MomentumAssignment scalar(std::vector<Rat> values) {
    MomentumAssignment m;
    m.D = 1;
    m.form = Matrix::identity(1);
    m.p.reserve(values.size());
    for (Rat& v : values) m.p.push_back({std::move(v)});
    return m;
  }

  int n() const { return static_cast<int>(p.size()); }

  std::vector<Rat> coordinate(int alpha) const {
    std::vector<Rat> out(p.size());
    for (size_t v = 0; v < p.size(); ++v) out[v] = p[v].at(alpha);
    return out;
  }

  bool is_conserved() const {
    for (int a = 0; a < D; ++a) {
      Rat s(0);
      for (const auto& pv : p) s += pv.at(a);
      if (sgn(s) != 0) return false;
    }
    return true;
  }

  void validate(int graph_n) const {
    if (D < 1) throw std::invalid_argument("momentum dimension must be >= 1");
    if (!form.is_square() || form.rows() != D) throw std::invalid_argument("bilinear form must be D x D");
    if (form != form.transpose()) throw std::invalid_argument("bilinear form must be symmetric");
    if (n() != graph_n) throw std::invalid_argument("momentum assignment covers a different vertex set");
    for (const auto& pv : p)
      if (static_cast<int>(pv.size()) != D) throw std::invalid_argument("momentum vector has wrong dimension");
    if (!is_conserved()) throw std::invalid_argument("momentum not conserved");
  }

  Rat pair(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
    Rat s(0);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j)
        if (sgn(form(i, j)) != 0) s += form(i, j) * a[i] * b[j];
    return s;
  }
};

/// Lift of one momentum coordinate through the boundary map.
inline MomentumLift momentum_lift(const Multigraph& g, const MomentumAssignment& mom, int coordinate) {
  return momentum_lift(g, mom.coordinate(coordinate));
}

/// -<p_X, p_Y> for the component partition {X, Y} of the spanning 2-forest f.
/// By conservation this equals <p_X, p_X>.
inline Rat q_of_forest(const Multigraph& g, const EdgeSubset& f, const MomentumAssignment& mom) {
  mom.validate(g.n());
  VertexPartition P = forest_partition(g, f);
  std::vector<Rat> px(mom.D, Rat(0)), py(mom.D, Rat(0));
  for (int v : P.block(0))
    for (int a = 0; a < mom.D; ++a) px[a] += mom.p[v][a];
  for (int v : P.block(1))
    for (int a = 0; a < mom.D; ++a) py[a] += mom.p[v][a];
  return -mom.pair(px, py);
}

/// Sparse homogeneous multilinear polynomial: support set -> coefficient,
/// monomial = prod_{e in S} y_e. Every support set has size `degree`.
struct SymanzikPolynomial {
  int m = 0;
  int degree = 0;
  std::map<EdgeSubset, Rat> terms;

  Rat eval(const std::vector<Rat>& y) const {
    if (static_cast<int>(y.size()) != m) throw std::invalid_argument("evaluation point has wrong length");
    Rat total(0);
    for (const auto& [support, coeff] : terms) {
      Rat mono = coeff;
      support.for_each([&](int e) { mono *= y[e]; });
      total += mono;
    }
    return total;
  }

  bool is_zero() const { return terms.empty(); }
};

/// First Symanzik by enumeration: sum over spanning trees of prod_{e not in T} y_e.
inline SymanzikPolynomial psi_enum(const Multigraph& g) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  SymanzikPolynomial psi;
  psi.m = g.m();
  psi.degree = genus(g);
  for (const EdgeSubset& t : spanning_trees(g)) psi.terms.emplace(t.complement(), Rat(1));
  return psi;
}

/// First Symanzik by determinant: det(M Y M^T) with the canonical cycle basis.
inline Rat psi_det(const Multigraph& g, const std::vector<Rat>& y) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  if (static_cast<int>(y.size()) != g.m()) throw std::invalid_argument("weight vector has wrong length");
  CycleBasis B = cycle_basis(g);
  return det(gram(B.M, Matrix::diagonal(y)));
}

/// Second Symanzik by enumeration: sum over spanning 2-forests of
/// q(F) prod_{e not in F} y_e. Zero coefficients are dropped.
inline SymanzikPolynomial phi_enum(const Multigraph& g, const MomentumAssignment& mom) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  mom.validate(g.n());
  SymanzikPolynomial phi;
  phi.m = g.m();
  phi.degree = genus(g) + 1;
  for (const EdgeSubset& f : spanning_2forests(g)) {
    Rat q = q_of_forest(g, f, mom);
    if (sgn(q) != 0) phi.terms.emplace(f.complement(), q);
  }
  return phi;
}

namespace detail {

inline Rat phi_det_scalar(const CycleBasis& B, const std::vector<Rat>& omega, const Matrix& Y) {
  Matrix N(B.M.rows() + 1, B.M.cols());
  for (int i = 0; i < B.M.rows(); ++i)
    for (int j = 0; j < B.M.cols(); ++j) N(i, j) = B.M(i, j);
  for (int j = 0; j < B.M.cols(); ++j) N(B.M.rows(), j) = omega[j];
  return det(gram(N, Y));
}

}  // namespace detail

/// Second Symanzik by determinant. For D = 1 this is det(N Y N^T) directly
/// (scaled by the 1x1 form). For D > 1 the quadratic form is recovered by
/// polarization over coordinate pairs of the scalar determinant route:
///   phi = sum_{a<=b} form_ab (2 - delta_ab) (det-route(w_a+w_b) - det-route(w_a-w_b)) / 4.
inline Rat phi_det(const Multigraph& g, const MomentumAssignment& mom, const std::vector<Rat>& y) {
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  mom.validate(g.n());
  if (static_cast<int>(y.size()) != g.m()) throw std::invalid_argument("weight vector has wrong length");
  for (const Rat& v : y)
    if (sgn(v) <= 0) throw std::invalid_argument("weights must be positive");

  CycleBasis B = cycle_basis(g);
  Matrix Y = Matrix::diagonal(y);
  std::vector<std::vector<Rat>> lifts(mom.D);
  for (int a = 0; a < mom.D; ++a) lifts[a] = momentum_lift(g, mom.coordinate(a), B.tree).omega;

  Rat total(0);
  for (int a = 0; a < mom.D; ++a)
    for (int b = a; b < mom.D; ++b) {
      if (sgn(mom.form(a, b)) == 0) continue;
      std::vector<Rat> sum(g.m()), diff(g.m());
      for (int j = 0; j < g.m(); ++j) {
        sum[j] = lifts[a][j] + lifts[b][j];
        diff[j] = lifts[a][j] - lifts[b][j];
      }
      Rat polar = (detail::phi_det_scalar(B, sum, Y) - detail::phi_det_scalar(B, diff, Y)) / 4;
      total += mom.form(a, b) * polar * (a == b ? 1 : 2);
    }
  return total;
}

/// phi/psi, exact. psi(y) > 0 is guaranteed for positive y on a connected
/// graph; psi = 0 is rejected.
inline Rat ratio(const Multigraph& g, const MomentumAssignment& mom, const std::vector<Rat>& y) {
  Rat psi = psi_det(g, y);
  if (sgn(psi) == 0) throw std::domain_error("psi vanishes at the evaluation point");
  return phi_det(g, mom, y) / psi;
}

/// Sign relating the paired minors of two vertex-equivalent 2-forests with a
/// common completing edge e:
///   det(N_{F1^c}) det(N_{F2^c})
///     = paired_minor_sign(F1,F2,e) * q(F1) * det(M_{T1^c}) det(M_{T2^c}),
/// with T_i = F_i + e. Expanding det(N_{F^c}) along the lift row picks up
/// (-1)^pos for the column position of e inside the ascending complement, and
/// the two positions need not agree, so the unsigned form of the relation can
/// fail; the parity below restores exact equality.
inline Rat paired_minor_sign(const EdgeSubset& f1, const EdgeSubset& f2, int e) {
  auto position = [&](const EdgeSubset& f) {
    int pos = 0;
    for (int id : f.complement().ids()) {
      if (id == e) return pos;
      ++pos;
    }
    throw std::invalid_argument("completing edge lies inside the forest");
  };
  return ((position(f1) + position(f2)) % 2 == 0) ? Rat(1) : Rat(-1);
}

}  // namespace symanzik
