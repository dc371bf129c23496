#include "ntk/gegenbauer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ntk/errors.hpp"
#include "ntk/quadrature.hpp"

namespace ntk {

namespace {

using u128 = unsigned __int128;

// C(n, r) exactly, or false on overflow of 128 bits.
bool binomial_exact(long n, long r, u128& out) {
  if (r < 0 || n < 0 || r > n) {
    out = 0;
    return true;
  }
  r = std::min(r, n - r);
  u128 acc = 1;
  const u128 limit = ~u128(0);
  for (long i = 1; i <= r; ++i) {
    const u128 num = static_cast<u128>(n - r + i);
    if (acc > limit / num) return false;
    acc = acc * num / static_cast<u128>(i);
  }
  out = acc;
  return true;
}

double clamp_domain(double t, int d, const char* who) {
  const double dd = d;
  if (!(std::abs(t) <= dd * (1.0 + 1e-12))) {
    throw DomainError(std::string(who) + ": |t| = " + std::to_string(std::abs(t)) +
                      " exceeds d = " + std::to_string(d));
  }
  return std::clamp(t, -dd, dd);
}

}  // namespace

double HarmonicDim::value() const {
  if (!approximate) return static_cast<double>(exact);
  return std::exp(log_value);
}

HarmonicDim harmonic_dim(int d, int k) {
  if (d < 2 || k < 0) throw DomainError("harmonic_dim: need d >= 2, k >= 0");
  HarmonicDim out;
  if (k == 0) {
    out.exact = 1;
    return out;
  }
  // B = (2k+d-2) (k+d-3)! / (k! (d-2)!)
  out.log_value = std::log(2.0 * k + d - 2.0) + std::lgamma(k + d - 2.0) -
                  std::lgamma(k + 1.0) - std::lgamma(d - 1.0);
  u128 a = 0, b = 0;
  if (binomial_exact(d + k - 1, k, a) && binomial_exact(d + k - 3, k - 2, b)) {
    const u128 diff = a - b;
    if (diff <= std::numeric_limits<std::uint64_t>::max()) {
      out.exact = static_cast<std::uint64_t>(diff);
      out.log_value = std::log(static_cast<double>(out.exact));
      return out;
    }
  }
  out.approximate = true;
  return out;
}

double harmonic_dim_ratio(int d, int k) {
  const double dk = d, kk = k;
  return (2.0 * kk + dk) / (2.0 * kk + dk - 2.0) * (kk + dk - 2.0) / (kk + 1.0);
}

void gegenbauer_all(int d, double t, std::vector<double>& out) {
  if (out.empty()) return;
  const double dd = d;
  out[0] = 1.0;
  if (out.size() == 1) return;
  const double x = t / dd;
  out[1] = x;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double denom = 2.0 * kk + dd - 2.0;
    out[k + 1] = (x * out[k] - kk / denom * out[k - 1]) * denom / (kk + dd - 2.0);
  }
}

double gegenbauer_eval(int d, int k, double t) {
  if (d < 2 || k < 0) throw DomainError("gegenbauer_eval: need d >= 2, k >= 0");
  t = clamp_domain(t, d, "gegenbauer_eval");
  std::vector<double> q(k + 1);
  gegenbauer_all(d, t, q);
  return q[k];
}

namespace {

struct TauMoments {
  std::vector<double> normalized;
  double mass = 0.0;
};

// Integrates sigma'(sqrt(d) u) q_k(d u) against the density proportional to
// (1 - u^2)^{(d-3)/2} on [-1, 1], where q_k = sqrt(B(d,k)) Q_k is the
// orthonormal Gegenbauer polynomial. The density is normalized with the same
// rule so the weights sum to one.
TauMoments tau_moments(const Activation& a, int d, int k_top, int per_panel) {
  const double dd = d, sqrt_d = std::sqrt(dd);
  std::vector<double> breaks{-1.0, 0.0, 1.0};
  for (double s : a.kinks()) {
    const double u = s / sqrt_d;
    if (u > -1.0 && u < 1.0 && u != 0.0) breaks.push_back(u);
  }
  std::sort(breaks.begin(), breaks.end());
  const QuadratureRule rule = composite_gauss_legendre(breaks, per_panel);

  // Orthonormal recurrence:
  //   q_{k+1} = sqrt(r_k)/b_k * (t/d) q_k - sqrt(r_k r_{k-1}) a_k/b_k q_{k-1}
  // with a_k = k/(2k+d-2), b_k = (k+d-2)/(2k+d-2), r_k = B(d,k+1)/B(d,k).
  std::vector<double> c1(k_top + 1), c2(k_top + 1);
  for (int k = 0; k < k_top; ++k) {
    const double kk = k, denom = 2.0 * kk + dd - 2.0;
    const double ak = kk / denom, bk = (kk + dd - 2.0) / denom;
    const double rk = harmonic_dim_ratio(d, k);
    c1[k] = std::sqrt(rk) / bk;
    c2[k] = k > 0 ? std::sqrt(rk * harmonic_dim_ratio(d, k - 1)) * ak / bk : 0.0;
  }

  const double expo = 0.5 * (dd - 3.0);
  std::vector<double> w(rule.nodes.size());
  double z = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double u = rule.nodes[i];
    w[i] = rule.weights[i] * (expo == 0.0 ? 1.0 : std::exp(expo * std::log1p(-u * u)));
    z += w[i];
  }

  TauMoments out{std::vector<double>(k_top + 1, 0.0), 0.0};
  std::vector<double> q(k_top + 1);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double wi = w[i] / z;
    if (wi == 0.0) continue;
    const double u = rule.nodes[i];
    const double s = a.derivative(sqrt_d * u);
    q[0] = 1.0;
    if (k_top >= 1) q[1] = c1[0] * u;
    for (int k = 1; k < k_top; ++k) q[k + 1] = c1[k] * u * q[k] - c2[k] * q[k - 1];
    const double ws = wi * s;
    for (int k = 0; k <= k_top; ++k) out.normalized[k] += ws * q[k];
    out.mass += ws * s;
  }
  return out;
}

}  // namespace

GegenbauerCoeffs gegenbauer_coeffs(const Activation& a, int d, int k_max) {
  if (d < 3) throw DomainError("gegenbauer_coeffs: need d >= 3");
  if (k_max < 0) throw DomainError("gegenbauer_coeffs: need k_max >= 0");

  int per_panel = std::max(64, k_max + 16);
  TauMoments prev = tau_moments(a, d, k_max, per_panel);
  for (;;) {
    if (per_panel > 16384) {
      throw QuadratureNonConvergence("gegenbauer_coeffs: no convergence for " + a.name() +
                                     " at d = " + std::to_string(d));
    }
    per_panel *= 2;
    TauMoments cur = tau_moments(a, d, k_max, per_panel);
    double change = std::abs(cur.mass - prev.mass);
    for (int k = 0; k <= k_max; ++k) {
      change = std::max(change, std::abs(cur.normalized[k] - prev.normalized[k]));
    }
    if (change <= 1e-11 * std::max(cur.mass, 1e-300)) {
      GegenbauerCoeffs out;
      out.d = d;
      out.mass = cur.mass;
      out.normalized = std::move(cur.normalized);
      out.lambda.resize(k_max + 1);
      for (int k = 0; k <= k_max; ++k) {
        out.lambda[k] = out.normalized[k] * std::exp(-0.5 * harmonic_dim(d, k).log_value);
      }
      out.nodes_per_panel = per_panel;
      return out;
    }
    prev = std::move(cur);
  }
}

namespace {

KernelCoeffs kernel_coeffs_fixed(const Activation& a, int d, int ell, int k_max) {
  const GegenbauerCoeffs g = gegenbauer_coeffs(a, d, k_max + 1);
  KernelCoeffs c;
  c.d = d;
  c.ell = ell;
  c.k_max = k_max;
  c.lambda = g.lambda;
  c.normalized = g.normalized;
  c.mass = g.mass;
  c.dims.reserve(k_max + 2);
  for (int k = 0; k <= k_max + 1; ++k) c.dims.push_back(harmonic_dim(d, k));

  // With s_k = B(d,k) lambda_k^2 = normalized_k^2:
  //   gamma_0 = lambda_1^2 = s_1 / d
  //   gamma_k = (k+1)/(2k+d) s_{k+1} + (k+d-3)/(2k+d-4) s_{k-1}
  const double dd = d;
  auto s = [&](int k) { return c.normalized[k] * c.normalized[k]; };
  c.gamma.resize(k_max + 1);
  c.gamma[0] = s(1) / dd;
  for (int k = 1; k <= k_max; ++k) {
    const double kk = k;
    c.gamma[k] = (kk + 1.0) / (2.0 * kk + dd) * s(k + 1) +
                 (kk + dd - 3.0) / (2.0 * kk + dd - 4.0) * s(k - 1);
  }
  double head = 0.0, total = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    total += c.gamma[k];
    if (k <= ell) head += c.gamma[k];
  }
  c.series_tail = c.mass - total;
  c.gamma_above_ell = c.mass - head;
  return c;
}

}  // namespace

KernelCoeffs kernel_coeffs(const Activation& a, int d, int ell, KernelSeriesOptions opts) {
  if (ell < 1) throw DomainError("kernel_coeffs: need ell >= 1");
  if (opts.k_max < ell + 2) throw DomainError("kernel_coeffs: need k_max >= ell + 2");
  int k_max = opts.k_max;
  for (;;) {
    KernelCoeffs c = kernel_coeffs_fixed(a, d, ell, k_max);
    if (!opts.auto_raise || k_max >= opts.cap || c.series_tail <= 1e-8 * c.mass) return c;
    k_max = std::min(opts.cap, 2 * k_max);
  }
}

double kernel_eval_truncated(const KernelCoeffs& c, double t, int degree) {
  t = clamp_domain(t, c.d, "kernel_eval");
  degree = std::min(degree, c.k_max);
  const double dd = c.d, x = t / dd;
  double prev = 1.0, cur = x;
  double sum = c.gamma[0];
  if (degree >= 1) sum += c.gamma[1] * cur;
  for (int k = 1; k < degree; ++k) {
    const double kk = k, denom = 2.0 * kk + dd - 2.0;
    const double next = (x * cur - kk / denom * prev) * denom / (kk + dd - 2.0);
    prev = cur;
    cur = next;
    sum += c.gamma[k + 1] * cur;
  }
  return sum;
}

KernelValue kernel_eval(const KernelCoeffs& c, double t) {
  return {kernel_eval_truncated(c, t, c.k_max), c.tail_bound()};
}

double arccos_kernel_relu(double t, int d) {
  t = clamp_domain(t, d, "arccos_kernel_relu");
  const double rho = std::clamp(t / d, -1.0, 1.0);
  return (std::numbers::pi - std::acos(rho)) / (2.0 * std::numbers::pi) * rho;
}

}  // namespace ntk
