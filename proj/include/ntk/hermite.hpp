#pragma once

#include <cmath>
#include <span>

namespace ntk {

// Orthonormal probabilists' Hermite polynomials, E[h_j(G) h_k(G)] = delta_jk:
//   h_0 = 1, h_1 = x, h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k+1).

// Fills out[0..out.size()) with h_0(x), ..., h_{K}(x).
inline void hermite_all(double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = (x * out[k] - std::sqrt(kk) * out[k - 1]) / std::sqrt(kk + 1.0);
  }
}

inline double hermite(int k, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) /
                        std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace ntk
