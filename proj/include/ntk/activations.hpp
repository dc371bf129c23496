#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ntk {

enum class ActivationKind {
  ReLU,
  LeakyReLU,        // param: negative slope
  Tanh,
  Sigmoid,
  Softplus,         // param: sharpness beta, sigma(x) = log(1 + e^{beta x}) / beta
  ShiftedSoftplus,  // param: offset c, sigma(x) = log(1 + e^{x + c})
  Linear,           // sigma(x) = x, sigma' = 1. Degenerate; test fixture only.
};

struct Activation {
  ActivationKind kind = ActivationKind::ReLU;
  double param = 0.0;

  static Activation relu() { return {ActivationKind::ReLU, 0.0}; }
  static Activation leaky_relu(double slope) { return {ActivationKind::LeakyReLU, slope}; }
  static Activation tanh() { return {ActivationKind::Tanh, 0.0}; }
  static Activation sigmoid() { return {ActivationKind::Sigmoid, 0.0}; }
  static Activation softplus(double sharpness) { return {ActivationKind::Softplus, sharpness}; }
  static Activation shifted_softplus(double offset) {
    return {ActivationKind::ShiftedSoftplus, offset};
  }
  static Activation linear() { return {ActivationKind::Linear, 0.0}; }

  // Names: relu, leaky_relu, tanh, sigmoid, softplus, shifted_softplus, linear.
  // A NaN param selects the default for that activation.
  static Activation parse(std::string_view name, double param);
  std::string name() const;

  double value(double x) const;
  // Weak derivative; at a kink returns the right limit.
  double derivative(double x) const;
  // Points where sigma' is discontinuous.
  std::vector<double> kinks() const;
  // sigma'' bounded everywhere.
  bool smooth() const;
};

double sigma_prime(const Activation& a, double x);

enum class CoefficientMethod { Analytic, Quadrature };

// Hermite expansion of sigma': mu_k = E[sigma'(G) h_k(G)].
struct HermiteProfile {
  std::vector<double> mu;  // mu_0..mu_K
  double second_moment = 0.0;  // E[sigma'(G)^2]
  std::vector<CoefficientMethod> method;

  int degree() const { return static_cast<int>(mu.size()) - 1; }
  double mean() const { return mu.front(); }  // E[sigma'(G)]
};

// Analytic coefficients for the step-type derivatives (ReLU, leaky ReLU,
// linear); piecewise Gauss-Legendre quadrature split at the kinks otherwise.
HermiteProfile hermite_profile(const Activation& a, int degree);
// Always by quadrature; lets tests compare against the analytic route.
HermiteProfile hermite_profile_quadrature(const Activation& a, int degree);

// sum_{k >= ell} mu_k^2, via E[sigma'^2] - sum_{k < ell} mu_k^2.
double v_sigma(const HermiteProfile& p, int ell);

// (lambda + v_sigma(p, ell)) / mu_0^2
double gamma_eff(const HermiteProfile& p, int ell, double lambda);

}  // namespace ntk
