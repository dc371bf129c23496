#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ntk/linalg.hpp"
#include "ntk/rng.hpp"

namespace ntk {

// f*(x) = sum_k c_k h_k(<beta, x>) with orthonormal Hermite h_k and unit beta.
struct HermiteSingleIndex {
  std::vector<double> coeffs;  // coeffs[k] multiplies h_k
  Vector beta;
};

// f*(x) = <beta, x>
struct LinearTarget {
  Vector beta;
};

struct TargetSpec {
  std::variant<HermiteSingleIndex, LinearTarget> model;
  double noise_sd = 0.0;

  Eigen::Index dim() const;
  const Vector& beta() const;
  // E[f*(x)^2] in the Gaussian limit of <beta, x>: sum c_k^2 or |beta|^2.
  double signal_power() const;
};

// sqrt(.4) h_1 + sqrt(.4) h_2 + sqrt(.2) h_4 along `beta` (normalized here).
TargetSpec paper_target(Vector beta, double noise_sd);
TargetSpec hermite_target(std::vector<double> coeffs, Vector beta, double noise_sd);
TargetSpec linear_target(Vector beta, double noise_sd);

struct Dataset {
  Matrix x;       // n x d, rows on the sphere of radius sqrt(d)
  Vector y;       // responses
  Vector f_star;  // noiseless target values
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }
};

struct WeightMatrix {
  Matrix w;  // N x d, unit rows
  std::uint64_t seed = 0;

  Eigen::Index count() const { return w.rows(); }
  Eigen::Index d() const { return w.cols(); }
};

Vector sample_sphere(Rng& rng, Eigen::Index d, double radius);
// n x d matrix of i.i.d. rows uniform on the sphere of the given radius.
Matrix sample_sphere_rows(Rng& rng, Eigen::Index n, Eigen::Index d, double radius);
// Random unit vector, used for beta*.
Vector random_direction(Rng& rng, Eigen::Index d);

double eval_target(const TargetSpec& t, const Eigen::Ref<const Vector>& x);
Vector eval_target_rows(const TargetSpec& t, const Matrix& x);

Dataset sample_dataset(Rng& rng, Eigen::Index n, Eigen::Index d, const TargetSpec& t);
WeightMatrix sample_weights(Rng& rng, Eigen::Index count, Eigen::Index d);

}  // namespace ntk
