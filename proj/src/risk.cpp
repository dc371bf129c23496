#include "ntk/risk.hpp"

#include <cmath>

#include "ntk/errors.hpp"

namespace ntk {

TestSet sample_test_set(Rng& rng, const TargetSpec& t, std::size_t n_test) {
  const Eigen::Index d = t.dim();
  TestSet out;
  out.x = sample_sphere_rows(rng, static_cast<Eigen::Index>(n_test), d,
                             std::sqrt(static_cast<double>(d)));
  out.f_star = eval_target_rows(t, out.x);
  return out;
}

RiskReport risk_from_predictions(const TestSet& test, const Vector& predictions,
                                 std::string method) {
  if (predictions.size() != test.f_star.size()) {
    throw ShapeError("risk_from_predictions: prediction count mismatch");
  }
  const Eigen::Index m = predictions.size();
  RiskReport r;
  r.method = std::move(method);
  r.n_test = static_cast<std::size_t>(m);
  if (m == 0) return r;
  const Vector sq = (test.f_star - predictions).array().square().matrix();
  r.total = sq.mean();
  if (m > 1) {
    const double var = (sq.array() - r.total).square().sum() / static_cast<double>(m - 1);
    r.std_error = std::sqrt(var / static_cast<double>(m));
  }
  return r;
}

RiskReport mc_risk(const Predictor& f, const TargetSpec& t, Rng& rng, std::size_t n_test) {
  if (n_test < 100) throw DomainError("mc_risk: n_test must be >= 100");
  const TestSet test = sample_test_set(rng, t, n_test);
  return risk_from_predictions(test, f(test.x), "monte_carlo");
}

RiskReport mc_risk(const FittedModel& m, const PredictionContext& ctx, const TargetSpec& t,
                   Rng& rng, std::size_t n_test) {
  RiskReport r = mc_risk([&](const Matrix& x) { return predict(m, ctx, x); }, t, rng, n_test);
  r.method = std::string("monte_carlo_") + to_string(m.kind);
  if (m.kind == ModelKind::Linear && std::holds_alternative<LinearTarget>(t.model)) {
    r.exact = exact_linear_risk(m.coef, t.beta());
    r.flagged = std::abs(*r.exact - r.total) > 4.0 * r.std_error;
  }
  return r;
}

double exact_linear_risk(const Vector& beta_hat, const Vector& beta_star) {
  if (beta_hat.size() != beta_star.size()) throw ShapeError("exact_linear_risk: dims differ");
  return (beta_hat - beta_star).squaredNorm();
}

BiasVariance bias_variance_traces(const Matrix& x, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("bias_variance_traces: gamma must be > 0");
  const double d = static_cast<double>(x.cols());
  const Vector s = sym_eigenvalues(SymMatrix(x.transpose() * x / d));
  double b = 0.0, v = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double si = std::max(s(i), 0.0);
    const double inv = 1.0 / ((gamma + si) * (gamma + si));
    b += inv;
    v += si * inv;
  }
  return {gamma * gamma / d * b, v / d};
}

BiasVariance asymptotic_bias_variance(double kappa, double gamma) {
  if (!(kappa > 0.0) || gamma < 0.0) {
    throw DomainError("asymptotic_bias_variance: need kappa > 0, gamma >= 0");
  }
  if (gamma == 0.0 && kappa <= 1.0) {
    throw DomainError("asymptotic_bias_variance: ridgeless limit is singular for kappa <= 1");
  }
  const double root = std::sqrt((kappa - 1.0 + gamma) * (kappa - 1.0 + gamma) + 4.0 * gamma);
  const double b = 0.5 * (1.0 - kappa + root - gamma * (1.0 + kappa + gamma) / root);
  const double v = 0.5 * (-1.0 + (kappa + gamma + 1.0) / root);
  return {b, v};
}

RiskReport two_pass_risk(const FitPredict& fit_predict, const Dataset& train, const TestSet& test,
                         std::string method) {
  const Vector pred_y = fit_predict(train.y, test.x);
  const Vector pred_f = fit_predict(train.f_star, test.x);
  RiskReport r = risk_from_predictions(test, pred_y, std::move(method));
  r.bias = (test.f_star - pred_f).squaredNorm() / static_cast<double>(test.f_star.size());
  r.variance = (pred_y - pred_f).squaredNorm() / static_cast<double>(test.f_star.size());
  return r;
}

std::vector<RiskReport> risk_suite(const std::vector<NamedPredictor>& models,
                                   const TestSet& test) {
  std::vector<RiskReport> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(risk_from_predictions(test, m.predict(test.x), m.label));
  return out;
}

}  // namespace ntk
