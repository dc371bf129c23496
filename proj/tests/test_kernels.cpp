#include <doctest.h>

#include <cmath>

#include "ntk/estimators.hpp"
#include "ntk/gegenbauer.hpp"
#include "ntk/kernels.hpp"
#include "ntk/sampling.hpp"
#include "support.hpp"

using namespace ntk;

namespace {

Matrix sphere_rows(Rng& rng, int n, int d) { return sample_sphere_rows(rng, n, d, std::sqrt(double(d))); }

// Random orthogonal matrix from a QR factorization.
Matrix random_rotation(Rng& rng, int d) {
  const Matrix g = testing::gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(d, d);
}

}  // namespace

TEST_CASE("feature_map examples") {
  Rng rng(1);
  const int d = 6;
  const Vector x = sample_sphere(rng, d, std::sqrt(double(d)));
  const WeightMatrix one = sample_weights(rng, 1, d);
  CHECK((feature_map(one, Activation::linear(), x) - x / std::sqrt(double(d))).norm() < 1e-15);

  // All weights on the far side of x: ReLU features vanish.
  WeightMatrix neg{Matrix(3, d), 0};
  for (int k = 0; k < 3; ++k) neg.w.row(k) = -x.transpose() / x.norm();
  CHECK(feature_map(neg, Activation::relu(), x).norm() == 0.0);

  const WeightMatrix w = sample_weights(rng, 7, d);
  const Activation a = Activation::tanh();
  double s = 0.0;
  for (int k = 0; k < 7; ++k) s += std::pow(a.derivative(w.w.row(k).dot(x)), 2);
  CHECK(feature_map(w, a, x).squaredNorm() == doctest::Approx(s / 7).epsilon(1e-12));
}

TEST_CASE("empirical kernel equals explicit feature product") {
  Rng rng(2);
  for (auto [n, N, d] : {std::tuple{3, 2, 4}, std::tuple{20, 30, 10}, std::tuple{40, 100, 50}}) {
    const Matrix x = sphere_rows(rng, n, d);
    const WeightMatrix w = sample_weights(rng, N, d);
    for (const Activation& a : {Activation::relu(), Activation::softplus(4)}) {
      const FeatureMatrix f = feature_matrix(w, a, x);
      const Matrix brute = f.phi * f.phi.transpose();
      CHECK((empirical_kernel(w, a, x).dense() - brute).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("empirical kernel diagonal and infinite-width limit") {
  Rng rng(3);
  const int d = 20, n = 5;
  const Matrix x = sphere_rows(rng, n, d);
  const WeightMatrix w = sample_weights(rng, 100000, d);
  const SymMatrix kn = empirical_kernel(w, Activation::relu(), x);
  for (int i = 0; i < n; ++i) {
    CHECK(kn(i, i) >= 0.0);
    CHECK(kn(i, i) <= 1.0);
  }
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), d, 1);
  const SymMatrix k = infinite_kernel_matrix(c, x);
  CHECK((kn.dense() - k.dense()).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("infinite kernel matrix") {
  Rng rng(4);
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), 30, 1);
  const Matrix x1 = sphere_rows(rng, 1, 30);
  const SymMatrix k1 = infinite_kernel_matrix(c, x1);
  CHECK(k1(0, 0) == doctest::Approx(c.mass - c.tail_bound()).epsilon(1e-12));

  const Matrix x = sphere_rows(rng, 60, 30);
  const SymMatrix k = infinite_kernel_matrix(c, x);
  CHECK(sym_eigenvalues(k)(0) >= -60 * c.tail_bound());

  const KernelCoeffs c500 = kernel_coeffs(Activation::relu(), 500, 1);
  const Matrix xb = sphere_rows(rng, 30, 500);
  const SymMatrix kb = infinite_kernel_matrix(c500, xb);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      CHECK(std::abs(kb(i, j) - arccos_kernel_relu(xb.row(i).dot(xb.row(j)), 500)) <=
            c500.tail_bound() + 0.01);
    }
  }
}

TEST_CASE("poly kernel matrix") {
  Rng rng(5);
  const int d = 15, n = 40;
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), d, 1);
  const Matrix x = sphere_rows(rng, n, d);
  const Matrix expect = c.gamma[0] * Matrix::Ones(n, n) + (c.gamma[1] / d) * x * x.transpose();
  const SymMatrix kp = poly_kernel_matrix(c, x);
  CHECK((kp.dense() - expect).cwiseAbs().maxCoeff() < 1e-12);
  const Vector ev = sym_eigenvalues(kp);
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) rank += ev(i) > 1e-8 * ev(ev.size() - 1);
  CHECK(rank <= 1 + d);

  // ell = 2 goes through the generic Gegenbauer sum.
  const KernelCoeffs c2 = kernel_coeffs(Activation::relu(), d, 2);
  const SymMatrix kp2 = poly_kernel_matrix(c2, x);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(kp2(i, j) == doctest::Approx(kernel_eval_truncated(c2, x.row(i).dot(x.row(j)), 2)));
    }
  }
}

TEST_CASE("cross kernels") {
  Rng rng(6);
  const int d = 12, n = 25, N = 40;
  const Matrix x = sphere_rows(rng, n, d);
  const WeightMatrix w = sample_weights(rng, N, d);
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), d, 1);
  const KernelBundle kb = build_kernels(w, Activation::relu(), c, x);

  const CrossKernels at3 = cross_kernels(w, Activation::relu(), c, x, x.row(3).transpose());
  CHECK(at3.nt(3) == doctest::Approx(kb.empirical(3, 3)));
  CHECK((at3.infinite - kb.infinite.dense().col(3)).norm() < 1e-12);
  CHECK((at3.poly - kb.poly.dense().col(3)).norm() < 1e-12);

  const Vector x0 = sample_sphere(rng, d, std::sqrt(double(d)));
  const CrossKernels lin = cross_kernels(w, Activation::linear(), kernel_coeffs(Activation::linear(), d, 1), x, x0);
  CHECK((lin.nt - x * x0 / d).norm() < 1e-12);

  // Appending x0 as an extra row and slicing gives the same cross-kernel.
  Matrix aug(n + 1, d);
  aug.topRows(n) = x;
  aug.row(n) = x0.transpose();
  const KernelBundle big = build_kernels(w, Activation::relu(), c, aug);
  const CrossKernels ck = cross_kernels(w, Activation::relu(), c, x, x0);
  CHECK((ck.nt - big.empirical.dense().col(n).head(n)).norm() < 1e-12);
  CHECK((ck.infinite - big.infinite.dense().col(n).head(n)).norm() < 1e-12);
  CHECK((ck.poly - big.poly.dense().col(n).head(n)).norm() < 1e-12);
}

TEST_CASE("rank deficiency when Nd < n") {
  Rng rng(7);
  const int d = 5, N = 4, n = 30;  // Nd = 20 < 30
  const Matrix x = sphere_rows(rng, n, d);
  const WeightMatrix w = sample_weights(rng, N, d);
  const SymMatrix kn = empirical_kernel(w, Activation::relu(), x);
  CHECK(std::abs(sym_eigenvalues(kn)(0)) < 1e-10);
}

TEST_CASE("kernels are rotation invariant") {
  Rng rng(8);
  const int d = 8, n = 10, N = 15;
  const Matrix x = sphere_rows(rng, n, d);
  const WeightMatrix w = sample_weights(rng, N, d);
  const Matrix q = random_rotation(rng, d);
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), d, 1);
  const KernelBundle a = build_kernels(w, Activation::relu(), c, x);
  const WeightMatrix wr{w.w * q.transpose(), 0};
  const KernelBundle b = build_kernels(wr, Activation::relu(), c, x * q.transpose());
  CHECK((a.empirical.dense() - b.empirical.dense()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.infinite.dense() - b.infinite.dense()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.poly.dense() - b.poly.dense()).cwiseAbs().maxCoeff() < 1e-10);
}
