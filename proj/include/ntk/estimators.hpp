#pragma once

#include <memory>
#include <optional>

#include "ntk/activations.hpp"
#include "ntk/gegenbauer.hpp"
#include "ntk/linalg.hpp"
#include "ntk/sampling.hpp"

namespace ntk {

enum class ModelKind { NT, KRR, PRR, Linear };

const char* to_string(ModelKind kind);

struct FitReport {
  double jitter = 0.0;
  double relative_residual = 0.0;  // |(M + reg I) alpha - y| / |y|
};

// A fitted regressor. Dual models carry alpha with (M + reg I) alpha = y;
// the linear model carries beta.
struct FittedModel {
  ModelKind kind = ModelKind::NT;
  Vector coef;       // alpha (dual) or beta (linear)
  double reg = 0.0;  // lambda (NT), gamma (KRR, linear), lambda + gamma_{>ell} (PRR)
  double norm_sq = 0.0;  // NT: |a|^2 = alpha^T K_N alpha
  FitReport report;
};

// Everything prediction needs besides the model itself: the training inputs
// and whichever kernel ingredients the model kind requires.
struct PredictionContext {
  Matrix train_x;
  std::optional<WeightMatrix> weights;
  std::optional<Activation> activation;
  std::optional<KernelCoeffs> coeffs;

  static PredictionContext for_nt(Matrix x, WeightMatrix w, Activation a);
  static PredictionContext for_kernel(Matrix x, KernelCoeffs c);
  static PredictionContext for_linear();
};

// Minimum eigenvalue below which a ridgeless fit is refused.
inline constexpr double kSingularTol = 1e-10;

FittedModel fit_nt(const SymMatrix& k_n, const Vector& y, double lambda);
FittedModel fit_krr(const SymMatrix& k, const Vector& y, double gamma);
FittedModel fit_prr(const SymMatrix& k_p, double gamma_above_ell, const Vector& y, double lambda);
FittedModel fit_linear(const Matrix& x, const Vector& y, double gamma);

Vector predict(const FittedModel& m, const PredictionContext& ctx, const Matrix& x_test);
double predict_one(const FittedModel& m, const PredictionContext& ctx,
                   const Eigen::Ref<const Vector>& x0);

}  // namespace ntk
