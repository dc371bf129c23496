#include "ntk/activations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ntk/errors.hpp"
#include "ntk/hermite.hpp"
#include "ntk/quadrature.hpp"

namespace ntk {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow
double softplus1(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

Activation Activation::parse(std::string_view name, double param) {
  const bool dflt = std::isnan(param);
  if (name == "relu") return relu();
  if (name == "leaky_relu") return leaky_relu(dflt ? 0.01 : param);
  if (name == "tanh") return tanh();
  if (name == "sigmoid") return sigmoid();
  if (name == "softplus") {
    if (!dflt && !(param > 0.0)) throw ConfigError("softplus sharpness must be > 0");
    return softplus(dflt ? 4.0 : param);
  }
  if (name == "shifted_softplus") return shifted_softplus(dflt ? 0.5 : param);
  if (name == "linear") return linear();
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

std::string Activation::name() const {
  switch (kind) {
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::LeakyReLU: return "leaky_relu";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::Softplus: return "softplus";
    case ActivationKind::ShiftedSoftplus: return "shifted_softplus";
    case ActivationKind::Linear: return "linear";
  }
  return "unknown";
}

double Activation::value(double x) const {
  switch (kind) {
    case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationKind::LeakyReLU: return x >= 0.0 ? x : param * x;
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::Sigmoid: return logistic(x);
    case ActivationKind::Softplus: return softplus1(param * x) / param;
    case ActivationKind::ShiftedSoftplus: return softplus1(x + param);
    case ActivationKind::Linear: return x;
  }
  return 0.0;
}

double Activation::derivative(double x) const {
  switch (kind) {
    case ActivationKind::ReLU: return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::LeakyReLU: return x >= 0.0 ? 1.0 : param;
    case ActivationKind::Tanh: {
      const double c = std::cosh(x);
      return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
    }
    case ActivationKind::Sigmoid: {
      const double s = logistic(x);
      return s * (1.0 - s);
    }
    case ActivationKind::Softplus: return logistic(param * x);
    case ActivationKind::ShiftedSoftplus: return logistic(x + param);
    case ActivationKind::Linear: return 1.0;
  }
  return 0.0;
}

std::vector<double> Activation::kinks() const {
  if (kind == ActivationKind::ReLU || kind == ActivationKind::LeakyReLU) return {0.0};
  return {};
}

bool Activation::smooth() const {
  return kind != ActivationKind::ReLU && kind != ActivationKind::LeakyReLU;
}

double sigma_prime(const Activation& a, double x) { return a.derivative(x); }

namespace {

// Hermite coefficients of the unit step 1{x >= 0}: mu_0 = 1/2 and, by
// Gaussian integration by parts, mu_k = phi(0) h_{k-1}(0) / sqrt(k).
std::vector<double> step_coefficients(int degree) {
  std::vector<double> h0(degree + 1);
  hermite_all(0.0, h0);
  const double phi0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> mu(degree + 1);
  mu[0] = 0.5;
  for (int k = 1; k <= degree; ++k) mu[k] = phi0 * h0[k - 1] / std::sqrt(double(k));
  return mu;
}

struct QuadResult {
  std::vector<double> mu;
  double second_moment;
};

QuadResult gaussian_moments(const Activation& a, int degree, int per_panel) {
  // Beyond |x| = L the Gaussian weight times h_k^2 (k <= degree) is far below
  // double precision.
  const double L = 2.0 * std::sqrt(degree + 1.0) + 12.0;
  std::vector<double> breaks{-L, 0.0, L};
  for (double k : a.kinks()) {
    if (k > -L && k < L && k != 0.0) breaks.push_back(k);
  }
  std::sort(breaks.begin(), breaks.end());
  const QuadratureRule rule = composite_gauss_legendre(breaks, per_panel);

  QuadResult out{std::vector<double>(degree + 1, 0.0), 0.0};
  std::vector<double> h(degree + 1);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const double w = rule.weights[i] * norm * std::exp(-0.5 * x * x);
    const double s = a.derivative(x);
    hermite_all(x, h);
    for (int k = 0; k <= degree; ++k) out.mu[k] += w * s * h[k];
    out.second_moment += w * s * s;
  }
  return out;
}

}  // namespace

HermiteProfile hermite_profile_quadrature(const Activation& a, int degree) {
  if (degree < 2) throw DomainError("hermite_profile: degree must be >= 2");
  QuadResult prev = gaussian_moments(a, degree, 64);
  for (int per_panel = 128; per_panel <= 8192; per_panel *= 2) {
    QuadResult cur = gaussian_moments(a, degree, per_panel);
    double change = std::abs(cur.second_moment - prev.second_moment);
    for (int k = 0; k <= degree; ++k) change = std::max(change, std::abs(cur.mu[k] - prev.mu[k]));
    if (change < 1e-10) {
      return {std::move(cur.mu), cur.second_moment,
              std::vector<CoefficientMethod>(degree + 1, CoefficientMethod::Quadrature)};
    }
    prev = std::move(cur);
  }
  throw QuadratureNonConvergence("hermite_profile: coefficients of " + a.name() +
                                 " did not stabilize");
}

HermiteProfile hermite_profile(const Activation& a, int degree) {
  if (degree < 2) throw DomainError("hermite_profile: degree must be >= 2");
  const std::vector<CoefficientMethod> analytic(degree + 1, CoefficientMethod::Analytic);
  switch (a.kind) {
    case ActivationKind::ReLU:
      return {step_coefficients(degree), 0.5, analytic};
    case ActivationKind::LeakyReLU: {
      // sigma' = slope + (1 - slope) * step
      const double s = a.param;
      std::vector<double> mu = step_coefficients(degree);
      for (double& m : mu) m *= (1.0 - s);
      mu[0] += s;
      return {std::move(mu), 0.5 * (1.0 + s * s), analytic};
    }
    case ActivationKind::Linear: {
      std::vector<double> mu(degree + 1, 0.0);
      mu[0] = 1.0;
      return {std::move(mu), 1.0, analytic};
    }
    default:
      return hermite_profile_quadrature(a, degree);
  }
}

double v_sigma(const HermiteProfile& p, int ell) {
  if (ell < 1 || ell > p.degree()) throw DomainError("v_sigma: need 1 <= ell <= K");
  double v = p.second_moment;
  for (int k = 0; k < ell; ++k) v -= p.mu[k] * p.mu[k];
  if (v < -1e-8) throw NegativeTail("v_sigma: Parseval complement is negative");
  return std::max(v, 0.0);
}

double gamma_eff(const HermiteProfile& p, int ell, double lambda) {
  if (lambda < 0.0) throw DomainError("gamma_eff: lambda must be >= 0");
  const double m0 = p.mu.front();
  if (std::abs(m0) < 1e-12) throw ZeroMeanDerivative("gamma_eff: E[sigma'(G)] vanishes");
  return (lambda + v_sigma(p, ell)) / (m0 * m0);
}

}  // namespace ntk
