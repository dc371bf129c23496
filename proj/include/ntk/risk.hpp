#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ntk/estimators.hpp"
#include "ntk/linalg.hpp"
#include "ntk/rng.hpp"
#include "ntk/sampling.hpp"

namespace ntk {

struct RiskReport {
  double total = 0.0;
  double std_error = 0.0;
  std::size_t n_test = 0;
  std::optional<double> bias;
  std::optional<double> variance;
  std::string method;
  std::optional<double> exact;  // closed-form value when available
  // Set when exact and Monte Carlo disagree by more than 4 standard errors.
  bool flagged = false;
};

// Fresh test points x0 ~ Unif(sphere(sqrt d)) with their noiseless targets.
struct TestSet {
  Matrix x;
  Vector f_star;
};

TestSet sample_test_set(Rng& rng, const TargetSpec& t, std::size_t n_test);

// Mean squared error of `predictions` against the test targets.
RiskReport risk_from_predictions(const TestSet& test, const Vector& predictions,
                                 std::string method);

using Predictor = std::function<Vector(const Matrix&)>;

RiskReport mc_risk(const Predictor& f, const TargetSpec& t, Rng& rng, std::size_t n_test);
RiskReport mc_risk(const FittedModel& m, const PredictionContext& ctx, const TargetSpec& t,
                   Rng& rng, std::size_t n_test);

// |beta_hat - beta*|^2, exact since E[x0 x0^T] = I on the sphere of radius sqrt(d).
double exact_linear_risk(const Vector& beta_hat, const Vector& beta_star);

struct BiasVariance {
  double bias;
  double variance;
};

// B = (gamma^2/d) Tr((gamma I + X^T X/d)^{-2}),
// V = (1/d^2) Tr(X^T X (gamma I + X^T X/d)^{-2}).
BiasVariance bias_variance_traces(const Matrix& x, double gamma);

// Proportional-limit (n/d -> kappa) closed forms of the two traces.
BiasVariance asymptotic_bias_variance(double kappa, double gamma);

struct NamedPredictor {
  std::string label;
  Predictor predict;
};

// Fits the same linear smoother twice, on the noisy labels and on the
// noiseless targets. bias = E(f* - fit_f)^2, variance = E(fit_y - fit_f)^2.
// A diagnostic split; total is the usual risk of fit_y.
using FitPredict = std::function<Vector(const Vector& labels, const Matrix& x_test)>;
RiskReport two_pass_risk(const FitPredict& fit_predict, const Dataset& train, const TestSet& test,
                         std::string method);

// Evaluates every model on one shared test set.
std::vector<RiskReport> risk_suite(const std::vector<NamedPredictor>& models, const TestSet& test);

}  // namespace ntk
