#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "symanzik/multigraph.hpp"
#include "symanzik/rational.hpp"

namespace symanzik {

/// Dense matrix over exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Rat(0)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  }

  static Matrix identity(int n) {
    Matrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
  }

  static Matrix diagonal(const std::vector<Rat>& d) {
    Matrix D(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) D(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return D;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return a_[index(i, j)]; }
  const Rat& operator()(int i, int j) const { return a_[index(i, j)]; }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& x = (*this)(i, k);
        if (sgn(x) == 0) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
      }
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference shape mismatch");
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  Matrix scaled(const Rat& c) const {
    Matrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = c * a_[i];
    return r;
  }

  Matrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    Matrix r(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < cols.size(); ++j) r(static_cast<int>(i), static_cast<int>(j)) = (*this)(rows[i], cols[j]);
    return r;
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (i != j && sgn((*this)(i, j)) != 0) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
      s += "[";
      for (int j = 0; j < cols_; ++j) {
        if (j) s += " ";
        s += rat_str((*this)(i, j));
      }
      s += "]\n";
    }
    return s;
  }

 private:
  size_t index(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("matrix index");
    return static_cast<size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rat> a_;
};

/// X * W * X^T, exact. W must be square with side X.cols().
inline Matrix gram(const Matrix& X, const Matrix& W) {
  if (!W.is_square() || W.rows() != X.cols()) throw std::invalid_argument("gram: W must be square of side X.cols()");
  return X * W * X.transpose();
}

/// Exact determinant by fraction-free (Bareiss) elimination: denominators are
/// cleared row by row first, then all intermediate divisions are exact over
/// the integers, which keeps entry growth polynomial. det of the empty 0x0
/// matrix is 1 (empty product), so genus-0 graphs get psi = 1 uniformly.
inline Rat det(const Matrix& X) {
  if (!X.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  const int n = X.rows();
  if (n == 0) return Rat(1);

  std::vector<std::vector<Int>> b(n, std::vector<Int>(n));
  Int denom = 1;
  for (int i = 0; i < n; ++i) {
    Int l = 1;
    for (int j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), X(i, j).get_den().get_mpz_t());
    for (int j = 0; j < n; ++j) {
      Int q;
      mpz_divexact(q.get_mpz_t(), l.get_mpz_t(), X(i, j).get_den().get_mpz_t());
      b[i][j] = X(i, j).get_num() * q;
    }
    denom *= l;
  }

  int sign = 1;
  Int prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (sgn(b[k][k]) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (sgn(b[i][k]) != 0) { p = i; break; }
      if (p == -1) return Rat(0);
      std::swap(b[k], b[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = b[i][j] * b[k][k] - b[i][k] * b[k][j];
        mpz_divexact(b[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      b[i][k] = 0;
    }
    prev = b[k][k];
  }
  Rat r(sign * b[n - 1][n - 1], denom);
  r.canonicalize();
  return r;
}

/// det of the submatrix with the given rows and columns; |I| must equal |J|.
inline Rat minor_det(const Matrix& X, const std::vector<int>& rows, const std::vector<int>& cols) {
  if (rows.size() != cols.size()) throw std::invalid_argument("minor_det: row and column sets differ in size");
  return det(X.submatrix(rows, cols));
}

inline Rat minor_det(const Matrix& X, const EdgeSubset& rows, const EdgeSubset& cols) {
  return minor_det(X, rows.ids(), cols.ids());
}

/// The paper-style shorthand X_J: all rows, columns J (|J| = row count).
inline Rat det_cols(const Matrix& X, const EdgeSubset& cols) {
  if (cols.size() != X.rows()) throw std::invalid_argument("det_cols: |J| must equal the row count");
  std::vector<int> all(X.rows());
  for (int i = 0; i < X.rows(); ++i) all[i] = i;
  return minor_det(X, all, cols.ids());
}

/// Exact inverse via Gauss-Jordan. Throws on singular input.
inline Matrix inverse(const Matrix& X) {
  if (!X.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
  const int n = X.rows();
  Matrix a = X, inv = Matrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int p = -1;
    for (int i = k; i < n; ++i)
      if (sgn(a(i, k)) != 0) { p = i; break; }
    if (p == -1) throw std::domain_error("matrix is singular");
    if (p != k)
      for (int j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    Rat piv = a(k, k);
    for (int j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k || sgn(a(i, k)) == 0) continue;
      Rat f = a(i, k);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

/// Cauchy-Binet coefficients of det(X W X^T) for diagonal W: the map
/// I -> det(X_I)^2 over all column subsets of size rows(X), zeros dropped.
/// Summing coeff * prod_{i in I} W_ii over the support reproduces the full
/// determinant exactly.
inline std::map<EdgeSubset, Rat> cauchy_binet_expand(const Matrix& X, const Matrix& W) {
  if (!W.is_square() || W.rows() != X.cols()) throw std::invalid_argument("cauchy_binet_expand: W must be square of side X.cols()");
  if (!W.is_diagonal()) throw std::invalid_argument("cauchy_binet_expand: W must be diagonal");
  if (X.rows() > X.cols()) throw std::invalid_argument("cauchy_binet_expand: more rows than columns");
  std::map<EdgeSubset, Rat> out;
  for_each_ksubset(X.cols(), X.rows(), [&](const EdgeSubset& I) {
    Rat d = det_cols(X, I);
    if (sgn(d) != 0) out.emplace(I, d * d);
  });
  return out;
}

/// S - W^T Mblk^{-1} W for column vector W; equals det([[Mblk,W],[W^T,S]]) / det(Mblk).
inline Rat schur_ratio(const Matrix& Mblk, const Matrix& W, const Rat& S) {
  if (!Mblk.is_square()) throw std::invalid_argument("schur_ratio: Mblk must be square");
  if (W.cols() != 1 || W.rows() != Mblk.rows()) throw std::invalid_argument("schur_ratio: W must be a column vector of matching size");
  Matrix x = inverse(Mblk) * W;  // throws on singular Mblk
  Rat acc = S;
  for (int i = 0; i < W.rows(); ++i) acc -= W(i, 0) * x(i, 0);
  return acc;
}

struct BlockInverseReport {
  bool n11_ok = false;
  bool n12_ok = false;
  bool n21_ok = false;
  bool n22_ok = false;
  bool all_ok() const { return n11_ok && n12_ok && n21_ok && n22_ok; }
};

/// Verifies the four Schur-complement expressions for the blocks of the
/// inverse of [[M11,M12],[M21,M22]] against a direct full inversion:
///   N11 = (M11 - M12 M22^-1 M21)^-1          N22 = (M22 - M21 M11^-1 M12)^-1
///   N12 = -M11^-1 M12 (M22 - M21 M11^-1 M12)^-1
///   N21 = -M22^-1 M21 (M11 - M12 M22^-1 M21)^-1
inline BlockInverseReport block_inverse_identities(const Matrix& M11, const Matrix& M12,
                                                   const Matrix& M21, const Matrix& M22) {
  const int p = M11.rows(), q = M22.rows();
  if (!M11.is_square() || !M22.is_square() || M12.rows() != p || M12.cols() != q || M21.rows() != q || M21.cols() != p)
    throw std::invalid_argument("block_inverse_identities: inconsistent block shapes");

  auto inv_named = [](const Matrix& X, const char* name) {
    try {
      return inverse(X);
    } catch (const std::domain_error&) {
      throw std::domain_error(std::string("singular block: ") + name);
    }
  };

  Matrix full(p + q, p + q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) full(i, j) = M11(i, j);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) full(i, p + j) = M12(i, j);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < p; ++j) full(p + i, j) = M21(i, j);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) full(p + i, p + j) = M22(i, j);

  Matrix N = inv_named(full, "full matrix");
  Matrix M11i = inv_named(M11, "M11");
  Matrix M22i = inv_named(M22, "M22");
  Matrix s1 = inv_named(M11 - M12 * M22i * M21, "Schur complement of M22");
  Matrix s2 = inv_named(M22 - M21 * M11i * M12, "Schur complement of M11");

  std::vector<int> top(p), bot(q);
  for (int i = 0; i < p; ++i) top[i] = i;
  for (int i = 0; i < q; ++i) bot[i] = p + i;

  BlockInverseReport r;
  r.n11_ok = N.submatrix(top, top) == s1;
  r.n22_ok = N.submatrix(bot, bot) == s2;
  r.n12_ok = N.submatrix(top, bot) == (M11i * M12 * s2).scaled(Rat(-1));
  r.n21_ok = N.submatrix(bot, top) == (M22i * M21 * s1).scaled(Rat(-1));
  return r;
}

}  // namespace symanzik
