#include "ntk/two_layer.hpp"

#include <cmath>
#include <string>

#include "ntk/errors.hpp"
#include "ntk/kernels.hpp"

namespace ntk {

namespace {

Vector output_signs(Eigen::Index half) {
  Vector b(2 * half);
  b.head(half).setOnes();
  b.tail(half).setConstant(-1.0);
  return b;
}

}  // namespace

Vector TwoLayerNet::forward(const Matrix& x) const {
  const Eigen::Index half = half_width();
  Matrix h = x * w.transpose();
  h = h.unaryExpr([this](double t) { return activation.value(t); });
  // Sum the + and - halves separately so identical halves cancel exactly.
  const Vector plus = h.leftCols(half).rowwise().sum();
  const Vector minus = h.rightCols(half).rowwise().sum();
  return (alpha / std::sqrt(static_cast<double>(half))) * (plus - minus);
}

double TwoLayerNet::forward_one(const Eigen::Ref<const Vector>& x) const {
  const Matrix row = x.transpose();
  return forward(row)(0);
}

TwoLayerNet init_symmetric(Rng& rng, Eigen::Index half_width, Eigen::Index d, double alpha,
                           const Activation& act) {
  if (!act.smooth()) {
    throw NonSmoothActivation("init_symmetric: " + act.name() +
                              " has unbounded second derivative");
  }
  if (!(alpha > 0.0)) throw DomainError("init_symmetric: alpha must be > 0");
  const WeightMatrix base = sample_weights(rng, half_width, d);
  TwoLayerNet net;
  net.w.resize(2 * half_width, d);
  net.w.topRows(half_width) = base.w;
  net.w.bottomRows(half_width) = base.w;
  net.alpha = alpha;
  net.activation = act;
  return net;
}

WeightMatrix nt_weights(const TwoLayerNet& initial) {
  return {initial.w.topRows(initial.half_width()), 0};
}

double train_loss(const TwoLayerNet& net, const Matrix& x, const Vector& y) {
  return (y - net.forward(x)).squaredNorm() / static_cast<double>(y.size());
}

Matrix loss_gradient(const TwoLayerNet& net, const Matrix& x, const Vector& y) {
  // dL/dw_k = -(2/n) (alpha/sqrt(N)) b_k sum_i r_i sigma'(<w_k, x_i>) x_i
  const Eigen::Index half = net.half_width();
  const double n = static_cast<double>(y.size());
  const Vector r = y - net.forward(x);
  Matrix s = x * net.w.transpose();
  s = s.unaryExpr([&net](double t) { return net.activation.derivative(t); });
  const Vector b = output_signs(half);
  Matrix g = (s.array().colwise() * r.array()).matrix().transpose() * x;
  g.array().colwise() *= b.array();
  return g * (-2.0 * net.alpha / (n * std::sqrt(static_cast<double>(half))));
}

double default_step(const TwoLayerNet& net, const Matrix& x) {
  // Gauss-Newton Hessian (2/n) J^T J has the same top eigenvalue as (2/n) J J^T,
  // where (J J^T)_ij = (alpha^2/N) sum_k sigma'_ik sigma'_jk <x_i, x_j>.
  const Eigen::Index half = net.half_width();
  Matrix s = x * net.w.transpose();
  s = s.unaryExpr([&net](double t) { return net.activation.derivative(t); });
  Matrix jj = (s * s.transpose()) * (net.alpha * net.alpha / static_cast<double>(half));
  jj.array() *= (x * x.transpose()).array();
  const Vector ev = sym_eigenvalues(SymMatrix(std::move(jj)));
  const double top = 2.0 / static_cast<double>(x.rows()) * ev(ev.size() - 1);
  return top > 0.0 ? 1.0 / top : 1.0;
}

TrainResult train_gd(TwoLayerNet net, const Matrix& x, const Vector& y, TrainOptions opts) {
  if (x.rows() != y.size()) throw ShapeError("train_gd: x and y disagree");
  double step = opts.step > 0.0 ? opts.step : default_step(net, x);
  TrainResult res;
  double loss = train_loss(net, x, y);
  res.losses.push_back(loss);
  long it = 0;
  for (; it < opts.max_iters && loss > opts.loss_tol; ++it) {
    const Matrix grad = loss_gradient(net, x, y);
    int halvings = 0;
    for (;;) {
      TwoLayerNet trial = net;
      trial.w -= step * grad;
      const double trial_loss = train_loss(trial, x, y);
      if (std::isfinite(trial_loss) && trial_loss <= loss) {
        net = std::move(trial);
        loss = trial_loss;
        break;
      }
      if (++halvings > opts.max_halvings) {
        throw Divergence("train_gd: loss increased at iteration " + std::to_string(it) +
                         " after " + std::to_string(opts.max_halvings) + " step halvings");
      }
      step *= 0.5;
    }
    res.losses.push_back(loss);
  }
  res.net = std::move(net);
  res.final_step = step;
  res.iterations = it;
  return res;
}

RiskReport compare_to_nt(const TwoLayerNet& net, const FittedModel& nt_model,
                         const PredictionContext& nt_ctx, const TestSet& test) {
  const Vector f_nn = net.forward(test.x);
  const Vector f_nt = predict(nt_model, nt_ctx, test.x);
  TestSet as_target{test.x, f_nt};
  return risk_from_predictions(as_target, f_nn, "nn_vs_nt");
}

}  // namespace ntk
