#pragma once

#include <vector>

namespace ntk {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached; the returned
// reference stays valid for the lifetime of the program.
const QuadratureRule& gauss_legendre(int n);

// Composite rule: Gauss-Legendre with `per_panel` nodes on each interval
// [breaks[i], breaks[i+1]]. `breaks` must be increasing.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel);

}  // namespace ntk
