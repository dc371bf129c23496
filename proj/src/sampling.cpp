#include "ntk/sampling.hpp"

#include <cmath>
#include <string>

#include "ntk/errors.hpp"
#include "ntk/hermite.hpp"

namespace ntk {

Eigen::Index TargetSpec::dim() const { return beta().size(); }

const Vector& TargetSpec::beta() const {
  return std::visit([](const auto& m) -> const Vector& { return m.beta; }, model);
}

double TargetSpec::signal_power() const {
  if (const auto* h = std::get_if<HermiteSingleIndex>(&model)) {
    double s = 0.0;
    for (double c : h->coeffs) s += c * c;
    return s;
  }
  return std::get<LinearTarget>(model).beta.squaredNorm();
}

TargetSpec hermite_target(std::vector<double> coeffs, Vector beta, double noise_sd) {
  const double norm = beta.norm();
  if (!(norm > 0.0)) throw DomainError("hermite_target: direction must be nonzero");
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw DomainError("hermite_target: non-finite coefficient");
  }
  if (noise_sd < 0.0) throw DomainError("hermite_target: noise level must be >= 0");
  return {HermiteSingleIndex{std::move(coeffs), beta / norm}, noise_sd};
}

TargetSpec paper_target(Vector beta, double noise_sd) {
  return hermite_target({0.0, std::sqrt(0.4), std::sqrt(0.4), 0.0, std::sqrt(0.2)},
                        std::move(beta), noise_sd);
}

TargetSpec linear_target(Vector beta, double noise_sd) {
  if (noise_sd < 0.0) throw DomainError("linear_target: noise level must be >= 0");
  return {LinearTarget{std::move(beta)}, noise_sd};
}

Vector sample_sphere(Rng& rng, Eigen::Index d, double radius) {
  if (d < 1) throw DomainError("sample_sphere: d must be >= 1");
  if (!(radius > 0.0)) throw DomainError("sample_sphere: radius must be > 0");
  Vector g(d);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (Eigen::Index i = 0; i < d; ++i) g(i) = rng.normal();
    const double norm = g.norm();
    if (norm >= 1e-300) return g * (radius / norm);
  }
  throw DegenerateGaussian("sample_sphere: 100 consecutive near-zero Gaussian draws");
}

Matrix sample_sphere_rows(Rng& rng, Eigen::Index n, Eigen::Index d, double radius) {
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = sample_sphere(rng, d, radius).transpose();
  return x;
}

Vector random_direction(Rng& rng, Eigen::Index d) { return sample_sphere(rng, d, 1.0); }

double eval_target(const TargetSpec& t, const Eigen::Ref<const Vector>& x) {
  if (x.size() != t.dim()) {
    throw ShapeError("eval_target: point has dimension " + std::to_string(x.size()) +
                     ", target expects " + std::to_string(t.dim()));
  }
  if (const auto* h = std::get_if<HermiteSingleIndex>(&t.model)) {
    std::vector<double> hk(h->coeffs.size());
    hermite_all(h->beta.dot(x), hk);
    double sum = 0.0;
    for (std::size_t k = 0; k < hk.size(); ++k) sum += h->coeffs[k] * hk[k];
    return sum;
  }
  return std::get<LinearTarget>(t.model).beta.dot(x);
}

Vector eval_target_rows(const TargetSpec& t, const Matrix& x) {
  Vector out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = eval_target(t, x.row(i).transpose());
  return out;
}

Dataset sample_dataset(Rng& rng, Eigen::Index n, Eigen::Index d, const TargetSpec& t) {
  if (n < 1) throw DomainError("sample_dataset: n must be >= 1");
  Dataset ds;
  ds.seed = rng.seed();
  ds.noise_sd = t.noise_sd;
  ds.x = sample_sphere_rows(rng, n, d, std::sqrt(static_cast<double>(d)));
  ds.f_star = eval_target_rows(t, ds.x);
  ds.y = ds.f_star;
  if (t.noise_sd > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) ds.y(i) += t.noise_sd * rng.normal();
  }
  return ds;
}

WeightMatrix sample_weights(Rng& rng, Eigen::Index count, Eigen::Index d) {
  if (count < 1) throw DomainError("sample_weights: N must be >= 1");
  return {sample_sphere_rows(rng, count, d, 1.0), rng.seed()};
}

}  // namespace ntk
