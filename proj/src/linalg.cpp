#include "ntk/linalg.hpp"

#include <cmath>
#include <string>

#include "ntk/errors.hpp"

namespace ntk {

SymMatrix::SymMatrix(Matrix a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("SymMatrix: matrix is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", expected square");
  }
  if (!a.allFinite()) throw DomainError("SymMatrix: non-finite entry");
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::shifted(double shift) const {
  SymMatrix out;
  out.a_ = a_;
  out.a_.diagonal().array() += shift;
  return out;
}

SpdSolution spd_solve(const SymMatrix& a, const Matrix& b) {
  const Eigen::Index n = a.order();
  if (b.rows() != n) throw ShapeError("spd_solve: right-hand side has wrong row count");
  if (n == 0) return {Matrix(0, b.cols()), {}};

  Eigen::LLT<Matrix> llt(a.dense());
  if (llt.info() == Eigen::Success) return {llt.solve(b), {}};

  const double scale = a.trace() / static_cast<double>(n);
  if (!(scale > 0.0)) {
    throw NotPositiveDefinite("spd_solve: Cholesky failed and trace is not positive");
  }
  for (double rel = 1e-12; rel <= 1e-6 * (1.0 + 1e-9); rel *= 10.0) {
    const double jitter = rel * scale;
    Matrix shifted = a.dense();
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) return {llt.solve(b), {jitter, true}};
  }
  throw NotPositiveDefinite("spd_solve: Cholesky failed even with jitter 1e-6*tr(A)/n");
}

EigenDecomposition sym_eig(const SymMatrix& a) {
  if (a.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.dense(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NonConvergence("sym_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

Vector sym_eigenvalues(const SymMatrix& a) {
  if (a.order() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NonConvergence("sym_eig: eigensolver did not converge");
  return es.eigenvalues();
}

double op_norm_sym(const SymMatrix& a) {
  if (a.order() == 0) return 0.0;
  const Vector ev = sym_eigenvalues(a);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace ntk
