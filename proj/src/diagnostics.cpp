#include "ntk/diagnostics.hpp"

#include <cmath>
#include <string>

#include "ntk/errors.hpp"

namespace ntk {

double min_eigenvalue(const SymMatrix& k) {
  if (k.order() == 0) throw ShapeError("min_eigenvalue: empty matrix");
  return sym_eigenvalues(k)(0);
}

double concentration_norm(const SymMatrix& k, const SymMatrix& k_n) {
  if (k.order() != k_n.order()) throw ShapeError("concentration_norm: shapes differ");
  const EigenDecomposition es = sym_eig(k);
  if (!(es.values(0) > 1e-12)) {
    throw SingularReference("concentration_norm: lambda_min(K) = " + std::to_string(es.values(0)));
  }
  const Vector inv_sqrt = es.values.array().rsqrt();
  const Matrix whiten = es.vectors * inv_sqrt.asDiagonal() * es.vectors.transpose();
  Matrix m = whiten * k_n.dense() * whiten;
  m.diagonal().array() -= 1.0;
  return op_norm_sym(SymMatrix(std::move(m)));
}

double decomposition_residual(const SymMatrix& k, const SymMatrix& k_p, double gamma_above_ell) {
  if (k.order() != k_p.order()) throw ShapeError("decomposition_residual: shapes differ");
  Matrix delta = k.dense() - k_p.dense();
  delta.diagonal().array() -= gamma_above_ell;
  return op_norm_sym(SymMatrix(std::move(delta)));
}

double gegenbauer_gram_norm(const Matrix& x, int k) {
  if (k < 1) throw DomainError("gegenbauer_gram_norm: need k >= 1");
  const int d = static_cast<int>(x.cols());
  const Matrix g = x * x.transpose();
  const Eigen::Index n = g.rows();
  Matrix q(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      q(i, j) = i == j ? 0.0 : gegenbauer_eval(d, k, g(i, j));
      q(j, i) = q(i, j);
    }
  }
  // Diagonal entries are Q_k(d) - 1 = 0.
  return op_norm_sym(SymMatrix(std::move(q)));
}

double psi_gram_deviation(const Matrix& x) {
  const Eigen::Index n = x.rows(), d = x.cols();
  if (n <= d) {
    throw ShapeError("psi_gram_deviation: need n >= d + 1, got n = " + std::to_string(n) +
                     ", d = " + std::to_string(d));
  }
  Matrix psi(n, d + 1);
  psi.col(0).setOnes();
  psi.rightCols(d) = x;
  Matrix g = psi.transpose() * psi / static_cast<double>(n);
  g.diagonal().array() -= 1.0;
  return op_norm_sym(SymMatrix(std::move(g)));
}

SpectralReport spectrum_groups(const SymMatrix& k_n, const KernelCoeffs& c, long n) {
  if (c.ell != 1 && c.ell != 2) throw DomainError("spectrum_groups: supports ell = 1, 2");
  if (k_n.order() != n) throw ShapeError("spectrum_groups: n does not match K_N");
  const Vector ev = sym_eigenvalues(k_n);
  SpectralReport r;
  r.spectrum.assign(ev.data(), ev.data() + ev.size());
  r.lambda_min = ev(0);
  r.lambda_max = ev(ev.size() - 1);

  const double nn = static_cast<double>(n), dd = c.d;
  const double base = c.gamma_above_ell;
  r.centers.push_back(base + c.gamma[0] * nn);
  r.predicted_counts.push_back(1);
  r.centers.push_back(base + c.gamma[1] * nn / dd);
  r.predicted_counts.push_back(c.d);
  long used = 1 + c.d;
  if (c.ell == 2) {
    const long b2 = static_cast<long>(harmonic_dim(c.d, 2).value());
    r.centers.push_back(base + c.gamma[2] * 2.0 * nn / (dd * dd));
    r.predicted_counts.push_back(b2);
    used += b2;
  }
  r.centers.push_back(base);
  r.predicted_counts.push_back(std::max(0L, n - used));

  r.counts.assign(r.centers.size(), 0);
  for (double lam : r.spectrum) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < r.centers.size(); ++g) {
      if (std::abs(lam - r.centers[g]) < std::abs(lam - r.centers[best])) best = g;
    }
    ++r.counts[best];
  }
  long diff = 0;
  for (std::size_t g = 0; g < r.counts.size(); ++g) {
    diff += std::abs(r.counts[g] - r.predicted_counts[g]);
  }
  r.misassigned = diff / 2;
  return r;
}

}  // namespace ntk
