#pragma once

#include <optional>
#include <vector>

#include "ntk/gegenbauer.hpp"
#include "ntk/linalg.hpp"

namespace ntk {

double min_eigenvalue(const SymMatrix& k);

// |K^{-1/2} K_N K^{-1/2} - I|_op, whitening through the eigendecomposition of K.
double concentration_norm(const SymMatrix& k, const SymMatrix& k_n);

// |K - gamma_{>ell} I - K^p|_op
double decomposition_residual(const SymMatrix& k, const SymMatrix& k_p, double gamma_above_ell);

// |Q_k - I|_op with [Q_k]_ij = Q_k^{(d)}(<x_i, x_j>)
double gegenbauer_gram_norm(const Matrix& x, int k);

// |n^{-1} Psi^T Psi - I|_op for Psi = [1_n, X] (degree <= 1 harmonics).
double psi_gram_deviation(const Matrix& x);

struct SpectralReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::vector<double> spectrum;          // ascending
  std::vector<double> centers;           // predicted group centers, largest first
  std::vector<long> predicted_counts;    // multiplicities matching `centers`
  std::vector<long> counts;              // eigenvalues assigned to each center
  long misassigned = 0;                  // sum |counts - predicted| / 2
  std::optional<double> concentration;   // filled by callers that have K
  std::optional<double> residual;
};

// Groups the spectrum of K_N around gamma_{>ell} + gamma_k k! n / d^k
// (k <= ell) and gamma_{>ell}. Supports ell = 1, 2.
SpectralReport spectrum_groups(const SymMatrix& k_n, const KernelCoeffs& c, long n);

}  // namespace ntk
