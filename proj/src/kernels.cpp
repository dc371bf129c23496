#include "ntk/kernels.hpp"

#include <cmath>

#include "ntk/errors.hpp"

namespace ntk {

namespace {

void check_dims(const WeightMatrix& w, Eigen::Index d, const char* who) {
  if (w.d() != d) {
    throw ShapeError(std::string(who) + ": weights have dimension " + std::to_string(w.d()) +
                     ", data has " + std::to_string(d));
  }
}

}  // namespace

Vector feature_map(const WeightMatrix& w, const Activation& a, const Eigen::Ref<const Vector>& x) {
  check_dims(w, x.size(), "feature_map");
  const Eigen::Index n_neurons = w.count(), d = w.d();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_neurons * d));
  const Vector pre = w.w * x;
  Vector phi(n_neurons * d);
  for (Eigen::Index k = 0; k < n_neurons; ++k) {
    phi.segment(k * d, d) = (scale * a.derivative(pre(k))) * x;
  }
  return phi;
}

FeatureMatrix feature_matrix(const WeightMatrix& w, const Activation& a, const Matrix& x) {
  FeatureMatrix out;
  out.phi.resize(x.rows(), w.count() * w.d());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.phi.row(i) = feature_map(w, a, x.row(i).transpose()).transpose();
  }
  out.weights_seed = w.seed;
  out.activation = a;
  return out;
}

Matrix derivative_matrix(const WeightMatrix& w, const Activation& a, const Matrix& x) {
  check_dims(w, x.cols(), "derivative_matrix");
  Matrix s = x * w.w.transpose();
  s = s.unaryExpr([&a](double t) { return a.derivative(t); });
  return s;
}

SymMatrix empirical_kernel(const WeightMatrix& w, const Activation& a, const Matrix& x) {
  return SymMatrix(cross_empirical(w, a, x, x));
}

Matrix cross_empirical(const WeightMatrix& w, const Activation& a, const Matrix& train,
                       const Matrix& test) {
  const Matrix s_train = derivative_matrix(w, a, train);
  const Matrix s_test = derivative_matrix(w, a, test);
  const double inv_n = 1.0 / static_cast<double>(w.count());
  const double inv_d = 1.0 / static_cast<double>(w.d());
  Matrix k = (s_test * s_train.transpose()) * inv_n;
  k.array() *= (test * train.transpose()).array() * inv_d;
  return k;
}

Matrix cross_infinite(const KernelCoeffs& c, const Matrix& train, const Matrix& test) {
  const Matrix g = test * train.transpose();
  Matrix k(g.rows(), g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) k(i, j) = kernel_eval(c, g(i, j)).value;
  }
  return k;
}

Matrix cross_poly(const KernelCoeffs& c, const Matrix& train, const Matrix& test) {
  const Matrix g = test * train.transpose();
  if (c.ell == 1) {
    // gamma_0 1 1^T + (gamma_1 / d) X_test X^T
    return (c.gamma[1] / c.d) * g + Matrix::Constant(g.rows(), g.cols(), c.gamma[0]);
  }
  Matrix k(g.rows(), g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      k(i, j) = kernel_eval_truncated(c, g(i, j), c.ell);
    }
  }
  return k;
}

SymMatrix infinite_kernel_matrix(const KernelCoeffs& c, const Matrix& x) {
  const Matrix g = x * x.transpose();
  const Eigen::Index n = g.rows();
  Matrix k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      k(i, j) = kernel_eval(c, g(i, j)).value;
      k(j, i) = k(i, j);
    }
  }
  return SymMatrix(std::move(k));
}

SymMatrix poly_kernel_matrix(const KernelCoeffs& c, const Matrix& x) {
  return SymMatrix(cross_poly(c, x, x));
}

CrossKernels cross_kernels(const WeightMatrix& w, const Activation& a, const KernelCoeffs& c,
                           const Matrix& x, const Eigen::Ref<const Vector>& x0) {
  const Matrix test = x0.transpose();
  return {cross_empirical(w, a, x, test).row(0).transpose(),
          cross_infinite(c, x, test).row(0).transpose(),
          cross_poly(c, x, test).row(0).transpose()};
}

KernelBundle build_kernels(const WeightMatrix& w, const Activation& a, const KernelCoeffs& c,
                           const Matrix& x) {
  return {empirical_kernel(w, a, x), infinite_kernel_matrix(c, x), poly_kernel_matrix(c, x),
          c.gamma_above_ell, c};
}

}  // namespace ntk
