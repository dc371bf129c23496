#pragma once

#include <cstdint>

#include "ntk/activations.hpp"
#include "ntk/gegenbauer.hpp"
#include "ntk/linalg.hpp"
#include "ntk/sampling.hpp"

namespace ntk {

// Phi(x) = (1/sqrt(Nd)) [sigma'(<x,w_1>) x, ..., sigma'(<x,w_N>) x]
Vector feature_map(const WeightMatrix& w, const Activation& a, const Eigen::Ref<const Vector>& x);

struct FeatureMatrix {
  Matrix phi;  // n x Nd
  std::uint64_t weights_seed = 0;
  Activation activation;
};

// Explicit n x Nd feature matrix. Intended for small Nd.
FeatureMatrix feature_matrix(const WeightMatrix& w, const Activation& a, const Matrix& x);

// n x N matrix of sigma'(<x_i, w_k>).
Matrix derivative_matrix(const WeightMatrix& w, const Activation& a, const Matrix& x);

// K_N = Phi Phi^T, assembled as (S S^T / N) .* (X X^T / d) with S the
// derivative matrix, so Phi is never formed.
SymMatrix empirical_kernel(const WeightMatrix& w, const Activation& a, const Matrix& x);

SymMatrix infinite_kernel_matrix(const KernelCoeffs& c, const Matrix& x);
SymMatrix poly_kernel_matrix(const KernelCoeffs& c, const Matrix& x);

// Cross-kernel blocks between test rows and training rows (m x n).
Matrix cross_empirical(const WeightMatrix& w, const Activation& a, const Matrix& train,
                       const Matrix& test);
Matrix cross_infinite(const KernelCoeffs& c, const Matrix& train, const Matrix& test);
Matrix cross_poly(const KernelCoeffs& c, const Matrix& train, const Matrix& test);

struct CrossKernels {
  Vector nt;        // K_N(., x0)
  Vector infinite;  // K(., x0)
  Vector poly;      // K^p(., x0)
};

CrossKernels cross_kernels(const WeightMatrix& w, const Activation& a, const KernelCoeffs& c,
                           const Matrix& x, const Eigen::Ref<const Vector>& x0);

struct KernelBundle {
  SymMatrix empirical;  // K_N
  SymMatrix infinite;   // K
  SymMatrix poly;       // K^p
  double gamma_above_ell = 0.0;
  KernelCoeffs coeffs;
};

KernelBundle build_kernels(const WeightMatrix& w, const Activation& a, const KernelCoeffs& c,
                           const Matrix& x);

}  // namespace ntk
