#pragma once

#include <vector>

#include "ntk/activations.hpp"
#include "ntk/estimators.hpp"
#include "ntk/linalg.hpp"
#include "ntk/risk.hpp"
#include "ntk/sampling.hpp"

namespace ntk {

// f(x) = (alpha / sqrt(N)) sum_{k<=2N} b_k sigma(<w_k, x>) with b_k = +1 for
// the first N units and -1 for the last N. Only the first layer is trained.
struct TwoLayerNet {
  Matrix w;  // 2N x d
  double alpha = 1.0;
  Activation activation;

  Eigen::Index half_width() const { return w.rows() / 2; }
  Vector forward(const Matrix& x) const;
  double forward_one(const Eigen::Ref<const Vector>& x) const;
};

// Symmetric initialization: rows k and N+k share one uniform unit vector, so
// the network is identically zero. The first N rows are the NT weights.
TwoLayerNet init_symmetric(Rng& rng, Eigen::Index half_width, Eigen::Index d, double alpha,
                           const Activation& act);

// First N rows of the initialization, as the matching NT weight matrix.
WeightMatrix nt_weights(const TwoLayerNet& initial);

// (1/n) sum (y_i - f(x_i))^2
double train_loss(const TwoLayerNet& net, const Matrix& x, const Vector& y);
Matrix loss_gradient(const TwoLayerNet& net, const Matrix& x, const Vector& y);

// 1 / (largest Hessian eigenvalue of the loss in the linearized model at net).
double default_step(const TwoLayerNet& net, const Matrix& x);

struct TrainOptions {
  double step = 0.0;        // <= 0 selects default_step
  long max_iters = 50000;
  double loss_tol = 1e-8;   // stop once the loss falls below this
  int max_halvings = 20;    // per iteration
};

struct TrainResult {
  TwoLayerNet net;
  std::vector<double> losses;  // losses[0] at initialization
  double final_step = 0.0;
  long iterations = 0;
};

// Full-batch gradient descent. A step that increases the loss is retried
// with half the step size; Divergence after max_halvings failures.
TrainResult train_gd(TwoLayerNet net, const Matrix& x, const Vector& y, TrainOptions opts = {});

// Monte Carlo estimate of |f_NN - f_NT|^2 in L^2 over a fresh test set.
RiskReport compare_to_nt(const TwoLayerNet& net, const FittedModel& nt_model,
                         const PredictionContext& nt_ctx, const TestSet& test);

}  // namespace ntk
