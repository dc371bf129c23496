#include "ntk/estimators.hpp"

#include <string>

#include "ntk/errors.hpp"
#include "ntk/kernels.hpp"

namespace ntk {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::NT: return "nt";
    case ModelKind::KRR: return "krr";
    case ModelKind::PRR: return "prr";
    case ModelKind::Linear: return "linear";
  }
  return "unknown";
}

PredictionContext PredictionContext::for_nt(Matrix x, WeightMatrix w, Activation a) {
  PredictionContext ctx;
  ctx.train_x = std::move(x);
  ctx.weights = std::move(w);
  ctx.activation = a;
  return ctx;
}

PredictionContext PredictionContext::for_kernel(Matrix x, KernelCoeffs c) {
  PredictionContext ctx;
  ctx.train_x = std::move(x);
  ctx.coeffs = std::move(c);
  return ctx;
}

PredictionContext PredictionContext::for_linear() { return {}; }

namespace {

FittedModel fit_dual(ModelKind kind, const SymMatrix& m, const Vector& y, double reg,
                     bool ridgeless_check, const char* who) {
  if (y.size() != m.order()) throw ShapeError(std::string(who) + ": y has wrong length");
  if (reg < 0.0) throw DomainError(std::string(who) + ": regularization must be >= 0");
  if (reg == 0.0 && ridgeless_check) {
    const double lmin = sym_eigenvalues(m)(0);
    if (!(lmin > kSingularTol)) {
      throw SingularKernel(std::string(who) + ": ridgeless fit with lambda_min = " +
                           std::to_string(lmin));
    }
  }
  const SymMatrix a = m.shifted(reg);
  SpdSolution sol = spd_solve(a, y);
  FittedModel out;
  out.kind = kind;
  out.coef = sol.x.col(0);
  out.reg = reg;
  out.report.jitter = sol.report.jitter;
  const double ynorm = y.norm();
  out.report.relative_residual =
      ynorm > 0.0 ? (a.dense() * out.coef - y).norm() / ynorm : out.coef.norm();
  return out;
}

}  // namespace

FittedModel fit_nt(const SymMatrix& k_n, const Vector& y, double lambda) {
  FittedModel m = fit_dual(ModelKind::NT, k_n, y, lambda, true, "fit_nt");
  m.norm_sq = m.coef.dot(k_n.dense() * m.coef);
  return m;
}

FittedModel fit_krr(const SymMatrix& k, const Vector& y, double gamma) {
  return fit_dual(ModelKind::KRR, k, y, gamma, true, "fit_krr");
}

FittedModel fit_prr(const SymMatrix& k_p, double gamma_above_ell, const Vector& y,
                    double lambda) {
  if (lambda < 0.0) throw DomainError("fit_prr: lambda must be >= 0");
  if (!(gamma_above_ell > 0.0)) {
    throw DomainError("fit_prr: gamma_{>ell} must be > 0 (degree-ell polynomial activation?)");
  }
  return fit_dual(ModelKind::PRR, k_p, y, lambda + gamma_above_ell, false, "fit_prr");
}

FittedModel fit_linear(const Matrix& x, const Vector& y, double gamma) {
  if (y.size() != x.rows()) throw ShapeError("fit_linear: y has wrong length");
  if (gamma < 0.0) throw DomainError("fit_linear: gamma must be >= 0");
  const double d = static_cast<double>(x.cols());
  const SymMatrix gram(x.transpose() * x / d);
  if (gamma == 0.0) {
    const double lmin = x.cols() > 0 ? sym_eigenvalues(gram)(0) : 0.0;
    if (!(lmin > kSingularTol)) {
      throw SingularDesign("fit_linear: X^T X is rank deficient at gamma = 0");
    }
  }
  const Vector rhs = x.transpose() * y / d;
  const SymMatrix a = gram.shifted(gamma);
  SpdSolution sol = spd_solve(a, rhs);
  FittedModel out;
  out.kind = ModelKind::Linear;
  out.coef = sol.x.col(0);
  out.reg = gamma;
  out.report.jitter = sol.report.jitter;
  const double rn = rhs.norm();
  out.report.relative_residual = rn > 0.0 ? (a.dense() * out.coef - rhs).norm() / rn : 0.0;
  return out;
}

Vector predict(const FittedModel& m, const PredictionContext& ctx, const Matrix& x_test) {
  switch (m.kind) {
    case ModelKind::Linear:
      if (x_test.cols() != m.coef.size()) throw ShapeError("predict: dimension mismatch");
      return x_test * m.coef;
    case ModelKind::NT:
      if (!ctx.weights || !ctx.activation) {
        throw ContextMismatch("predict: NT model needs weights and activation");
      }
      break;
    case ModelKind::KRR:
    case ModelKind::PRR:
      if (!ctx.coeffs) throw ContextMismatch("predict: kernel model needs kernel coefficients");
      break;
  }
  if (ctx.train_x.rows() != m.coef.size()) {
    throw ContextMismatch("predict: context has " + std::to_string(ctx.train_x.rows()) +
                          " training rows, model has " + std::to_string(m.coef.size()));
  }
  Matrix cross;
  if (m.kind == ModelKind::NT) {
    cross = cross_empirical(*ctx.weights, *ctx.activation, ctx.train_x, x_test);
  } else if (m.kind == ModelKind::KRR) {
    cross = cross_infinite(*ctx.coeffs, ctx.train_x, x_test);
  } else {
    cross = cross_poly(*ctx.coeffs, ctx.train_x, x_test);
  }
  return cross * m.coef;
}

double predict_one(const FittedModel& m, const PredictionContext& ctx,
                   const Eigen::Ref<const Vector>& x0) {
  const Matrix row = x0.transpose();
  return predict(m, ctx, row)(0);
}

}  // namespace ntk
