#include <doctest.h>

#include <cmath>

#include "ntk/errors.hpp"
#include "ntk/estimators.hpp"
#include "ntk/kernels.hpp"
#include "ntk/sampling.hpp"
#include "support.hpp"

using namespace ntk;

namespace {

struct Setup {
  Dataset data;
  WeightMatrix w;
  Activation a = Activation::relu();
};

Setup make(std::uint64_t seed, int n, int N, int d, double noise = 0.3) {
  Rng rng(seed);
  const TargetSpec t = paper_target(random_direction(rng, d), noise);
  Setup s;
  s.data = sample_dataset(rng, n, d, t);
  s.w = sample_weights(rng, N, d);
  return s;
}

}  // namespace

TEST_CASE("fit_nt interpolates at lambda = 0 in the over-parametrized regime") {
  const Setup s = make(1, 40, 20, 10);  // Nd = 200 >= 2n
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  const FittedModel m = fit_nt(kn, s.data.y, 0.0);
  const Vector fit = kn.dense() * m.coef;
  CHECK((fit - s.data.y).cwiseAbs().maxCoeff() < 1e-6);
  const PredictionContext ctx = PredictionContext::for_nt(s.data.x, s.w, s.a);
  CHECK((predict(m, ctx, s.data.x) - s.data.y).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(m.norm_sq == doctest::Approx(m.coef.dot(kn.dense() * m.coef)));
}

TEST_CASE("fit_nt refuses singular kernels at lambda = 0") {
  const Setup s = make(2, 30, 4, 5);  // Nd = 20 < n
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  CHECK_THROWS_AS(fit_nt(kn, s.data.y, 0.0), SingularKernel);
  CHECK_NOTHROW(fit_nt(kn, s.data.y, 0.1));
}

TEST_CASE("ridge shrinkage and scalar closed form") {
  const Setup s = make(3, 15, 10, 6);
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  const FittedModel big = fit_nt(kn, s.data.y, 1e9);
  CHECK((big.coef - s.data.y / 1e9).norm() < 1e-15);
  CHECK((kn.dense() * big.coef).cwiseAbs().maxCoeff() < 1e-8);

  const Setup one = make(4, 1, 10, 6);
  const SymMatrix k1 = empirical_kernel(one.w, one.a, one.data.x);
  const double lam = 0.7, y = one.data.y(0), kk = k1(0, 0);
  const FittedModel m1 = fit_nt(k1, one.data.y, lam);
  CHECK(kk * m1.coef(0) == doctest::Approx(y * kk / (lam + kk)));
}

TEST_CASE("fit_krr") {
  Matrix k(2, 2);
  k << 2, 1, 1, 3;
  Vector y(2);
  y << 1, -1;
  const double g = 0.5;
  // (K + g I)^{-1} = [[3.5,-1],[-1,2.5]] / (2.5*3.5 - 1)
  const double det = 2.5 * 3.5 - 1.0;
  const FittedModel m = fit_krr(SymMatrix(k), y, g);
  CHECK(m.coef(0) == doctest::Approx((3.5 * 1 - 1 * -1) / det));
  CHECK(m.coef(1) == doctest::Approx((-1 * 1 + 2.5 * -1) / det));
  CHECK(fit_krr(SymMatrix(k), Vector::Zero(2), g).coef.norm() == 0.0);
  const FittedModel interp = fit_krr(SymMatrix(k), y, 0.0);
  CHECK((k * interp.coef - y).norm() < 1e-6);
}

TEST_CASE("fit_prr") {
  Rng rng(5);
  const int d = 8, n = 20;
  Matrix x = sample_sphere_rows(rng, n, d, std::sqrt(double(d)));
  x.row(1) = x.row(0);  // duplicated row
  const KernelCoeffs c = kernel_coeffs(Activation::relu(), d, 1);
  const Vector y = testing::gaussian_matrix(rng, n, 1).col(0);
  const FittedModel m = fit_prr(poly_kernel_matrix(c, x), c.gamma_above_ell, y, 0.0);
  CHECK(m.reg == doctest::Approx(c.gamma_above_ell));
  CHECK(m.report.relative_residual < 1e-8);

  // gamma_0 -> 0: the PRR smoother is the intercept-free linear smoother
  // (g1/d) X X^T ((lambda+r) I + (g1/d) X X^T)^{-1} y.
  KernelCoeffs c0 = c;
  c0.gamma[0] = 0.0;
  const double lam = 0.3;
  const FittedModel p = fit_prr(poly_kernel_matrix(c0, x), c.gamma_above_ell, y, lam);
  const Matrix xx = (c.gamma[1] / d) * x * x.transpose();
  const Matrix direct =
      xx * (xx + (lam + c.gamma_above_ell) * Matrix::Identity(n, n)).inverse();
  const PredictionContext ctx = PredictionContext::for_kernel(x, c0);
  CHECK((predict(p, ctx, x) - direct * y).norm() < 1e-9);
}

TEST_CASE("fit_linear") {
  Rng rng(6);
  const int d = 10, n = 40;
  const Vector beta = random_direction(rng, d);
  const Dataset data = sample_dataset(rng, n, d, linear_target(beta, 0.0));
  CHECK((fit_linear(data.x, data.y, 0.0).coef - beta).norm() < 1e-8);
  CHECK(fit_linear(data.x, data.y, 1e12).coef.norm() < 1e-9);

  // d = 1: beta = (sum x y / 1) / (gamma + sum x^2 / 1)
  Matrix x1(3, 1);
  x1 << 1, -1, 1;
  Vector y1(3);
  y1 << 2, 0.5, 1;
  const double g = 0.4;
  CHECK(fit_linear(x1, y1, g).coef(0) == doctest::Approx((2 - 0.5 + 1) / (g + 3)));

  const Dataset few = sample_dataset(rng, 5, d, linear_target(beta, 0.0));
  CHECK_THROWS_AS(fit_linear(few.x, few.y, 0.0), SingularDesign);
}

TEST_CASE("predict: contexts, batch vs loop") {
  const Setup s = make(7, 25, 30, 8);
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  const FittedModel nt = fit_nt(kn, s.data.y, 0.1);
  const PredictionContext ctx = PredictionContext::for_nt(s.data.x, s.w, s.a);
  Rng rng(8);
  const Matrix xt = sample_sphere_rows(rng, 10, 8, std::sqrt(8.0));
  const Vector batch = predict(nt, ctx, xt);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(batch(i) - predict_one(nt, ctx, xt.row(i).transpose())) < 1e-12);

  CHECK_THROWS_AS(predict(nt, PredictionContext::for_linear(), xt), ContextMismatch);
  const KernelCoeffs c = kernel_coeffs(s.a, 8, 1);
  CHECK_THROWS_AS(predict(nt, PredictionContext::for_kernel(s.data.x, c), xt), ContextMismatch);

  const FittedModel lin = fit_linear(s.data.x, s.data.y, 0.5);
  CHECK(predict_one(lin, PredictionContext::for_linear(), xt.row(0).transpose()) ==
        doctest::Approx(lin.coef.dot(xt.row(0).transpose())));
}

TEST_CASE("ridge objective and residual monotonicity") {
  const Setup s = make(9, 30, 10, 6);
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  double prev = -1.0;
  for (double lam : {0.01, 0.1, 1.0, 10.0}) {
    const FittedModel m = fit_nt(kn, s.data.y, lam);
    const Vector r = s.data.y - kn.dense() * m.coef;
    CHECK(r.squaredNorm() + lam * m.norm_sq <= s.data.y.squaredNorm());
    CHECK(r.norm() >= prev);
    prev = r.norm();
  }
}

TEST_CASE("min-norm property against null-space perturbations") {
  const Setup s = make(10, 12, 6, 5);  // Nd = 30 > n
  const FeatureMatrix f = feature_matrix(s.w, s.a, s.data.x);
  const SymMatrix kn = empirical_kernel(s.w, s.a, s.data.x);
  const FittedModel m = fit_nt(kn, s.data.y, 0.0);
  const Vector a_hat = f.phi.transpose() * m.coef;
  CHECK(a_hat.squaredNorm() == doctest::Approx(m.norm_sq).epsilon(1e-9));
  // Null space of Phi from a full SVD.
  Eigen::JacobiSVD<Matrix> svd(f.phi, Eigen::ComputeFullV);
  const Matrix null = svd.matrixV().rightCols(f.phi.cols() - f.phi.rows());
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vector delta = null * testing::gaussian_matrix(rng, null.cols(), 1).col(0) * 0.01;
    CHECK((f.phi * delta).norm() < 1e-10);
    CHECK((a_hat + delta).squaredNorm() >= m.norm_sq);
  }
}

TEST_CASE("kernel ridge with linear features equals feature-space ridge") {
  Rng rng(12);
  const int d = 6, n = 15;
  const Dataset data = sample_dataset(rng, n, d, linear_target(random_direction(rng, d), 0.2));
  const KernelCoeffs c = kernel_coeffs(Activation::linear(), d, 1);
  const double g = 0.3;
  const FittedModel krr = fit_krr(infinite_kernel_matrix(c, data.x), data.y, g);
  // sigma' = 1: K = X X^T / d, feature-space ridge with features x/sqrt(d).
  const Matrix phi = data.x / std::sqrt(double(d));
  const Vector a = (phi.transpose() * phi + g * Matrix::Identity(d, d)).ldlt().solve(phi.transpose() * data.y);
  const Matrix xt = sample_sphere_rows(rng, 10, d, std::sqrt(double(d)));
  const Vector lhs = predict(krr, PredictionContext::for_kernel(data.x, c), xt);
  CHECK((lhs - xt / std::sqrt(double(d)) * a).norm() < 1e-8);
}
