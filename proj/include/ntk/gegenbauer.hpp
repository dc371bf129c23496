#pragma once

#include <cstdint>
#include <vector>

#include "ntk/activations.hpp"

namespace ntk {

// Dimension of the space of degree-k spherical harmonics in d variables.
struct HarmonicDim {
  double log_value = 0.0;
  std::uint64_t exact = 0;   // valid when !approximate
  bool approximate = false;  // true when B(d,k) does not fit in 64 bits

  double value() const;  // may be +inf when approximate
};

HarmonicDim harmonic_dim(int d, int k);

// B(d,k+1) / B(d,k), d >= 3.
double harmonic_dim_ratio(int d, int k);

// Q_k^{(d)}(t) on [-d, d], normalized so Q_k(d) = 1. Upward recurrence.
double gegenbauer_eval(int d, int k, double t);
// Q_0(t) .. Q_K(t) into out (size K+1).
void gegenbauer_all(int d, double t, std::vector<double>& out);

// Gegenbauer coefficients of sigma' against the law tau of <x, e_1>,
// x uniform on the sphere of radius sqrt(d).
struct GegenbauerCoeffs {
  int d = 0;
  std::vector<double> lambda;      // lambda_{d,k}
  std::vector<double> normalized;  // sqrt(B(d,k)) * lambda_{d,k}
  double mass = 0.0;               // ||sigma'||^2 in L^2(tau)
  int nodes_per_panel = 0;
};

GegenbauerCoeffs gegenbauer_coeffs(const Activation& a, int d, int k_max);

struct KernelSeriesOptions {
  int k_max = 60;
  // Double k_max until the certified tail is <= 1e-8 * mass or k_max hits cap.
  bool auto_raise = true;
  int cap = 200;
};

// Infinite-width kernel K(x,x') = sum_k gamma_k Q_k(<x,x'>).
struct KernelCoeffs {
  int d = 0;
  int ell = 1;
  int k_max = 0;
  std::vector<double> lambda;      // lambda_{d,k}, k <= k_max + 1
  std::vector<double> normalized;  // sqrt(B) lambda, k <= k_max + 1
  std::vector<HarmonicDim> dims;   // B(d,k), k <= k_max + 1
  std::vector<double> gamma;       // gamma_k, k <= k_max
  double mass = 0.0;               // K(x, x) = sum of all gamma_k
  double gamma_above_ell = 0.0;    // gamma_{>ell}
  double series_tail = 0.0;        // gamma_{>k_max} = mass - sum_{k<=k_max} gamma_k

  double tail_bound() const { return series_tail > 0.0 ? series_tail : 0.0; }
};

KernelCoeffs kernel_coeffs(const Activation& a, int d, int ell, KernelSeriesOptions opts = {});

struct KernelValue {
  double value;
  double tail_bound;
};

KernelValue kernel_eval(const KernelCoeffs& c, double t);
// Truncation sum_{k <= degree} gamma_k Q_k(t).
double kernel_eval_truncated(const KernelCoeffs& c, double t, int degree);

// ((pi - arccos(t/d)) / (2 pi)) * (t/d): the d -> infinity limit of the
// ReLU kernel.
double arccos_kernel_relu(double t, int d);

}  // namespace ntk
