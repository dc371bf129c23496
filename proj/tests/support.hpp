#pragma once

#include <algorithm>
#include <vector>

#include "ntk/linalg.hpp"
#include "ntk/rng.hpp"

namespace testing {

inline ntk::Matrix gaussian_matrix(ntk::Rng& rng, Eigen::Index r, Eigen::Index c) {
  ntk::Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  }
  return m;
}

inline ntk::SymMatrix random_spd(ntk::Rng& rng, Eigen::Index n) {
  const ntk::Matrix g = gaussian_matrix(rng, n, n);
  ntk::Matrix a = g * g.transpose() / static_cast<double>(n);
  a.diagonal().array() += 0.5;
  return ntk::SymMatrix(a);
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace testing
