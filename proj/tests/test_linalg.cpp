#include <doctest.h>

#include <cmath>

#include "ntk/errors.hpp"
#include "ntk/linalg.hpp"
#include "support.hpp"

using namespace ntk;

TEST_CASE("SymMatrix symmetrizes and rejects bad input") {
  Matrix a(2, 2);
  a << 1, 2, 4, 3;
  const SymMatrix s(a);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS(SymMatrix(bad));
  CHECK_THROWS(SymMatrix(Matrix::Zero(2, 3)));
}

TEST_CASE("spd_solve small cases") {
  const Vector b = Vector::Random(3);
  CHECK((spd_solve(SymMatrix::identity(3), b).x - b).norm() < 1e-15);

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 2, 4;
  Vector rhs(2);
  rhs << 2, 4;
  CHECK((spd_solve(SymMatrix(d), rhs).x - Vector::Ones(2)).norm() < 1e-14);

  // [[2,1],[1,2]]^{-1} = (1/3) [[2,-1],[-1,2]], applied to (1,1).
  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  const SpdSolution sol = spd_solve(SymMatrix(a), Vector::Ones(2));
  CHECK(sol.x(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(sol.x(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_FALSE(sol.report.jittered);
}

TEST_CASE("spd_solve jitter and failure") {
  // Singular PSD matrix: rank one.
  Matrix u = Matrix::Ones(3, 1);
  const SymMatrix r1(u * u.transpose());
  const SpdSolution s = spd_solve(r1, Vector::Ones(3));
  CHECK(s.report.jittered);
  CHECK(s.report.jitter > 0.0);
  CHECK(s.report.jitter <= 1e-6 * r1.trace() / 3 * (1 + 1e-12));

  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(spd_solve(SymMatrix(neg), Vector::Ones(2)), NotPositiveDefinite);
}

TEST_CASE("spd_solve inverts random SPD matrices") {
  Rng rng(1);
  for (int n : {1, 5, 20, 50}) {
    const SymMatrix a = testing::random_spd(rng, n);
    const Matrix inv = spd_solve(a, Matrix::Identity(n, n)).x;
    CHECK((inv * a.dense() - Matrix::Identity(n, n)).norm() < 1e-7);
    const Matrix b = testing::gaussian_matrix(rng, n, 3);
    const Matrix x = spd_solve(a, b).x;
    CHECK((a.dense() * x - b).norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("sym_eig examples") {
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 1, 2;
  const Vector ev = sym_eigenvalues(SymMatrix(d));
  CHECK(ev(0) == 1.0);
  CHECK(ev(1) == 2.0);
  CHECK(ev(2) == 3.0);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const EigenDecomposition e = sym_eig(SymMatrix(swap));
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  // Eigenvector for -1 is (1,-1)/sqrt(2) up to sign.
  CHECK(std::abs(e.vectors(0, 0) + e.vectors(1, 0)) < 1e-14);
  CHECK(std::abs(std::abs(e.vectors(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-14);

  const Vector ones = sym_eigenvalues(SymMatrix::identity(7));
  CHECK((ones - Vector::Ones(7)).norm() < 1e-14);
}

TEST_CASE("sym_eig reconstructs and is orthonormal") {
  Rng rng(2);
  for (int n : {2, 10, 40}) {
    const Matrix g = testing::gaussian_matrix(rng, n, n);
    const SymMatrix a(g + g.transpose());
    const EigenDecomposition e = sym_eig(a);
    const Matrix& v = e.vectors;
    CHECK((a.dense() * v - v * e.values.asDiagonal()).norm() <= 1e-8 * a.dense().norm());
    CHECK((v.transpose() * v - Matrix::Identity(n, n)).norm() <= 1e-8);
    CHECK((v * e.values.asDiagonal() * v.transpose() - a.dense()).norm() <= 1e-7 * a.dense().norm());
    for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("op_norm_sym") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << -5, 2;
  CHECK(op_norm_sym(SymMatrix(d)) == doctest::Approx(5.0));
  CHECK(op_norm_sym(SymMatrix(Matrix::Zero(4, 4))) == 0.0);
  Vector u(3);
  u << 2, 0, 0;
  Rng rng(3);
  const Vector w = testing::gaussian_matrix(rng, 3, 1).col(0).normalized() * 2.0;
  CHECK(op_norm_sym(SymMatrix(u * u.transpose())) == doctest::Approx(4.0));
  CHECK(op_norm_sym(SymMatrix(w * w.transpose())) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("op_norm_sym dominates random Rayleigh quotients") {
  Rng rng(4);
  const Matrix g = testing::gaussian_matrix(rng, 12, 12);
  const SymMatrix a(g + g.transpose());
  const double norm = op_norm_sym(a);
  double best = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Vector u = testing::gaussian_matrix(rng, 12, 1).col(0).normalized();
    best = std::max(best, std::abs(u.dot(a.dense() * u)));
  }
  CHECK(best <= norm * (1 + 1e-12));
  CHECK(best > 0.5 * norm);
}

TEST_CASE("shifted adds to the diagonal") {
  const SymMatrix s = SymMatrix::identity(3).shifted(2.0);
  CHECK(s(1, 1) == 3.0);
  CHECK(s(0, 1) == 0.0);
}
