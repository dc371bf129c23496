#pragma once

#include <Eigen/Dense>

namespace ntk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric matrix. The constructor replaces A by (A + A^T)/2 and
// rejects non-finite entries, so every SymMatrix is exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Matrix a);

  static SymMatrix identity(Eigen::Index n);

  Eigen::Index order() const { return a_.rows(); }
  const Matrix& dense() const { return a_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return a_(i, j); }
  double trace() const { return a_.trace(); }

  // this + shift * I
  SymMatrix shifted(double shift) const;

 private:
  Matrix a_;
};

struct SolveReport {
  double jitter = 0.0;  // absolute diagonal shift that made Cholesky succeed
  bool jittered = false;
};

struct SpdSolution {
  Matrix x;
  SolveReport report;
};

// Solves A X = B by Cholesky. On failure retries with diagonal jitter
// 1e-12 * tr(A)/n, escalating x10 up to 1e-6 * tr(A)/n, then throws
// NotPositiveDefinite.
SpdSolution spd_solve(const SymMatrix& a, const Matrix& b);

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // columns orthonormal
};

EigenDecomposition sym_eig(const SymMatrix& a);
Vector sym_eigenvalues(const SymMatrix& a);

// max |eigenvalue|
double op_norm_sym(const SymMatrix& a);

}  // namespace ntk
