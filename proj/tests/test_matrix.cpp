#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "symanzik/matrix.hpp"
#include "symanzik/rational.hpp"

using namespace symanzik;

namespace {
Matrix mat(int r, int c, std::initializer_list<long> entries) {
  Matrix m(r, c);
  auto it = entries.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = Rat(*it++);
  return m;
}
}  // namespace

TEST_CASE("determinant: pinned values and conventions") {
  REQUIRE(det(mat(2, 2, {1, 1, -2, 0})) == Rat(2));
  REQUIRE(det(Matrix(0, 0)) == Rat(1));  // empty product
  REQUIRE(det(mat(2, 2, {1, 1, 1, 1})) == Rat(0));
  REQUIRE_THROWS_AS(det(Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("determinant agrees with Laplace expansion on random rationals") {
  Rng rng(404);
  for (int k = 0; k < 60; ++k) {
    int n = static_cast<int>(rng.below(5)) + 1;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = make_rat(rng.irange(-8, 8), rng.irange(1, 5));
    REQUIRE(det(a) == oracle::det_laplace(a));
  }
}

TEST_CASE("gram") {
  Matrix M = mat(1, 3, {1, 1, 1});
  std::vector<Rat> y = {Rat(2), Rat(3), Rat(5)};
  Matrix G = gram(M, Matrix::diagonal(y));
  REQUIRE(G.rows() == 1);
  REQUIRE(G(0, 0) == Rat(10));
  REQUIRE(gram(M, Matrix::identity(3))(0, 0) == Rat(3));
  Matrix empty(0, 3);
  REQUIRE(det(gram(empty, Matrix::identity(3))) == Rat(1));
  REQUIRE_THROWS_AS(gram(M, Matrix::identity(2)), std::invalid_argument);
}

TEST_CASE("minor_det") {
  Matrix N = mat(2, 3, {1, 1, 1, -1, -2, 0});
  EdgeSubset J(3);
  J = J.with(1).with(2);
  REQUIRE(det_cols(N, J) == Rat(2));
  REQUIRE(minor_det(N, std::vector<int>{}, std::vector<int>{}) == Rat(1));
  Matrix M = mat(1, 3, {1, 1, 1});
  REQUIRE(det_cols(M, EdgeSubset(3).with(2)) == Rat(1));
  REQUIRE_THROWS_AS(minor_det(N, std::vector<int>{0}, std::vector<int>{0, 1}), std::invalid_argument);
}

TEST_CASE("cauchy_binet_expand: pinned coefficient maps") {
  Matrix M = mat(1, 3, {1, 1, 1});
  auto em = cauchy_binet_expand(M, Matrix::identity(3));
  REQUIRE(em.size() == 3);
  for (const auto& [I, c] : em) REQUIRE(c == Rat(1));

  // one zero column never appears in any support set
  Matrix Z = mat(1, 3, {1, 0, 1});
  auto ez = cauchy_binet_expand(Z, Matrix::identity(3));
  REQUIRE(ez.size() == 2);
  for (const auto& [I, c] : ez) REQUIRE_FALSE(I.contains(1));

  Matrix N = mat(2, 3, {1, 1, 1, -1, -2, 0});
  auto en = cauchy_binet_expand(N, Matrix::identity(3));
  REQUIRE(en.size() == 3);
  REQUIRE(en.at(EdgeSubset(3).with(0).with(1)) == Rat(1));
  REQUIRE(en.at(EdgeSubset(3).with(0).with(2)) == Rat(1));
  REQUIRE(en.at(EdgeSubset(3).with(1).with(2)) == Rat(4));
}

TEST_CASE("cauchy_binet_expand reproduces the determinant at random weights") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int m = static_cast<int>(rng.below(4)) + 2;
    int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(m))) + 1;
    Matrix X(r, m);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < m; ++j) X(i, j) = Rat(rng.irange(-3, 3));
    std::vector<Rat> w(m);
    for (int j = 0; j < m; ++j) w[j] = make_rat(rng.irange(-6, 6), rng.irange(1, 4));
    Matrix W = Matrix::diagonal(w);
    Rat direct = det(gram(X, W));
    Rat summed(0);
    for (const auto& [I, c] : cauchy_binet_expand(X, W)) {
      Rat mono = c;
      I.for_each([&](int e) { mono *= w[e]; });
      summed += mono;
    }
    REQUIRE(direct == summed);
  }
}

TEST_CASE("schur_ratio") {
  REQUIRE(schur_ratio(mat(1, 1, {2}), mat(1, 1, {1}), Rat(1)) == make_rat(1, 2));
  REQUIRE(schur_ratio(Matrix::identity(2), mat(2, 1, {1, 1}), Rat(3)) == Rat(1));
  REQUIRE(schur_ratio(mat(2, 2, {3, 1, 1, 2}), mat(2, 1, {0, 0}), Rat(7)) == Rat(7));
  REQUIRE_THROWS_AS(schur_ratio(mat(2, 2, {1, 1, 1, 1}), mat(2, 1, {1, 1}), Rat(1)), std::domain_error);
}

TEST_CASE("schur_ratio times det(M) equals the bordered determinant") {
  Rng rng(77);
  for (int k = 0; k < 40; ++k) {
    int n = static_cast<int>(rng.below(4)) + 1;
    Matrix Mb(n, n), W(n, 1);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Mb(i, j) = make_rat(rng.irange(-7, 7), rng.irange(1, 4));
    } while (sgn(det(Mb)) == 0);
    for (int i = 0; i < n; ++i) W(i, 0) = make_rat(rng.irange(-7, 7), rng.irange(1, 4));
    Rat S = make_rat(rng.irange(-7, 7), rng.irange(1, 4));
    Matrix T(n + 1, n + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = Mb(i, j);
    for (int i = 0; i < n; ++i) {
      T(i, n) = W(i, 0);
      T(n, i) = W(i, 0);
    }
    T(n, n) = S;
    REQUIRE(schur_ratio(Mb, W, S) * det(Mb) == det(T));
  }
}

TEST_CASE("block inverse identities") {
  // block-diagonal: off blocks vanish, diagonal blocks invert separately
  Matrix M11 = mat(2, 2, {2, 1, 1, 2});
  Matrix M22 = mat(1, 1, {5});
  auto rep = block_inverse_identities(M11, Matrix(2, 1), Matrix(1, 2), M22);
  REQUIRE(rep.all_ok());

  // 1+1 split: N11 = d / det
  Matrix a = mat(1, 1, {3}), b = mat(1, 1, {2}), c = mat(1, 1, {1}), d = mat(1, 1, {4});
  REQUIRE(block_inverse_identities(a, b, c, d).all_ok());
  Matrix full = mat(2, 2, {3, 2, 1, 4});
  REQUIRE(inverse(full)(0, 0) == Rat(4) / det(full));

  Rng rng(99);
  int done = 0;
  while (done < 25) {
    Matrix X11(3, 3), X12(3, 2), X21(2, 3), X22(2, 2);
    auto fill = [&](Matrix& X) {
      for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) X(i, j) = make_rat(rng.irange(-5, 5), rng.irange(1, 3));
    };
    fill(X11);
    fill(X12);
    fill(X21);
    fill(X22);
    try {
      REQUIRE(block_inverse_identities(X11, X12, X21, X22).all_ok());
      ++done;
    } catch (const std::domain_error&) {
    }
  }

  REQUIRE_THROWS_WITH(block_inverse_identities(mat(1, 1, {0}), b, c, d), "singular block: M11");
}

TEST_CASE("inverse") {
  Matrix a = mat(2, 2, {1, 2, 3, 4});
  Matrix i = inverse(a);
  REQUIRE(a * i == Matrix::identity(2));
  REQUIRE_THROWS_AS(inverse(mat(2, 2, {1, 2, 2, 4})), std::domain_error);
}
