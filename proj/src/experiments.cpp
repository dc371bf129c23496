#include "ntk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>

#include "ntk/activations.hpp"
#include "ntk/diagnostics.hpp"
#include "ntk/errors.hpp"
#include "ntk/estimators.hpp"
#include "ntk/gegenbauer.hpp"
#include "ntk/kernels.hpp"
#include "ntk/risk.hpp"
#include "ntk/rng.hpp"
#include "ntk/svg.hpp"
#include "ntk/two_layer.hpp"

namespace ntk {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(count, 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

TargetSpec make_target(const ExperimentConfig& cfg, int d) {
  Rng rng(derive_seed(*cfg.seed, "beta_star"));
  Vector beta = random_direction(rng, d);
  if (cfg.target == "linear") return linear_target(std::move(beta), cfg.sigma_eps);
  if (cfg.target == "hermite") return hermite_target(cfg.target_coeffs, std::move(beta), cfg.sigma_eps);
  return paper_target(std::move(beta), cfg.sigma_eps);
}

namespace {

struct Seeds {
  std::uint64_t cell, data, weights, test;
};

// Every row carries `cell`; the sub-streams follow from it alone, so one
// cell can be replayed without running the rest of the grid.
Seeds cell_seeds(std::uint64_t master, std::string_view label,
                 std::initializer_list<std::uint64_t> indices) {
  const std::uint64_t cell = derive_seed(master, label, indices);
  return {cell, derive_seed(cell, "data"), derive_seed(cell, "weights"), derive_seed(cell, "test")};
}

KernelSeriesOptions series_options(const ExperimentConfig& cfg) {
  return {cfg.k_max, cfg.k_max_auto, std::max(200, cfg.k_max)};
}

void add_common_fixed(ResultTable& t, const ExperimentConfig& cfg, const Activation& act) {
  t.fixed.emplace_back("experiment", to_string(cfg.experiment));
  t.fixed.emplace_back("seed", std::to_string(*cfg.seed));
  t.fixed.emplace_back("activation", act.name());
  t.fixed.emplace_back("activation_param", format_double(act.param));
  t.fixed.emplace_back("target", cfg.target);
  t.fixed.emplace_back("sigma_eps", format_double(cfg.sigma_eps));
  t.fixed.emplace_back("n_rep", std::to_string(cfg.n_rep));
  t.fixed.emplace_back("n_test", std::to_string(cfg.n_test));
  t.fixed.emplace_back("ell", std::to_string(cfg.ell));
  std::string ds;
  for (int d : cfg.d) ds += (ds.empty() ? "" : ";") + std::to_string(d);
  t.fixed.emplace_back("d", ds);
}

double mean_sq(const Vector& v) { return v.squaredNorm() / static_cast<double>(v.size()); }

// Min-norm interpolant coefficients through the pseudo-inverse, for cells
// where K_N is singular and the Cholesky route is refused.
Vector pinv_coef(const SymMatrix& k, const Vector& y) {
  const EigenDecomposition e = sym_eig(k);
  const double top = std::max(std::abs(e.values(e.values.size() - 1)), 1.0);
  const double cutoff = std::max(kSingularTol, 1e-12 * top);
  Vector proj = e.vectors.transpose() * y;
  for (Eigen::Index i = 0; i < proj.size(); ++i) {
    proj(i) = e.values(i) > cutoff ? proj(i) / e.values(i) : 0.0;
  }
  return e.vectors * proj;
}

}  // namespace

ResultTable run_phase_heatmap(const ExperimentConfig& cfg) {
  validate(cfg);
  const Activation act = Activation::parse(cfg.activation, cfg.activation_param);
  const int d = cfg.d.front();
  const TargetSpec target = make_target(cfg, d);
  const std::uint64_t master = *cfg.seed;

  ResultTable t;
  t.experiment = "phase_heatmap";
  t.columns = {"N", "n", "rep", "seed", "singular", "train_err", "test_err_raw", "test_err_capped"};
  add_common_fixed(t, cfg, act);
  t.fixed.emplace_back("test_cap", format_double(cfg.test_cap));
  t.fixed.emplace_back("singular_tol", format_double(kSingularTol));

  const std::size_t nN = cfg.N.size(), nn = cfg.n.size(), reps = cfg.n_rep;
  std::vector<std::vector<Cell>> rows(nN * nn * reps);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t r = task % reps, j = (task / reps) % nn, i = task / (reps * nn);
    const long N = cfg.N[i], n = cfg.n[j];
    const Seeds s = cell_seeds(master, "phase_heatmap", {i, j, r});
    Rng rd(s.data), rw(s.weights), rt(s.test);
    const Dataset data = sample_dataset(rd, n, d, target);
    const WeightMatrix w = sample_weights(rw, N, d);
    const TestSet test = sample_test_set(rt, target, cfg.n_test);

    const SymMatrix k_n = empirical_kernel(w, act, data.x);
    const double lmin = min_eigenvalue(k_n);
    const bool singular = lmin <= kSingularTol;
    Vector coef = singular ? pinv_coef(k_n, data.y) : fit_nt(k_n, data.y, 0.0).coef;
    const double train_err = mean_sq(data.y - k_n.dense() * coef);
    const Vector pred = cross_empirical(w, act, data.x, test.x) * coef;
    const double test_err = risk_from_predictions(test, pred, "mc").total;
    rows[task] = {static_cast<std::int64_t>(N), static_cast<std::int64_t>(n),
                  static_cast<std::int64_t>(r), s.cell, static_cast<std::int64_t>(singular),
                  train_err, test_err, std::min(test_err, cfg.test_cap)};
  });
  t.rows = std::move(rows);
  return t;
}

ResultTable run_gamma_match(const ExperimentConfig& cfg) {
  validate(cfg);
  const Activation act = Activation::parse(cfg.activation, cfg.activation_param);
  const int d = cfg.d.front();
  const TargetSpec target = make_target(cfg, d);
  const std::uint64_t master = *cfg.seed;
  const KernelCoeffs coeffs = kernel_coeffs(act, d, cfg.ell, series_options(cfg));
  const HermiteProfile prof = hermite_profile(act, std::max(4, cfg.ell + 1));

  ResultTable t;
  t.experiment = "gamma_match";
  t.columns = {"grid_var", "grid_val", "lambda", "gamma_eff", "rep", "seed", "r_nt", "r_lin", "r_prr"};
  add_common_fixed(t, cfg, act);
  const bool sweep_N = cfg.grid_var == "N";
  t.fixed.emplace_back(sweep_N ? "n" : "N", std::to_string(sweep_N ? cfg.n.front() : cfg.N.front()));
  t.fixed.emplace_back("gamma_above_ell", format_double(coeffs.gamma_above_ell));
  t.fixed.emplace_back("v_sigma", format_double(v_sigma(prof, cfg.ell)));

  const std::vector<long>& grid = sweep_N ? cfg.N : cfg.n;
  const std::size_t ng = grid.size(), reps = cfg.n_rep, nl = cfg.lambda.size();
  std::vector<std::vector<std::vector<Cell>>> blocks(ng * reps);
  parallel_for(blocks.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t r = task % reps, g = task / reps;
    const long N = sweep_N ? grid[g] : cfg.N.front();
    const long n = sweep_N ? cfg.n.front() : grid[g];
    const Seeds s = cell_seeds(master, "gamma_match", {g, r});
    Rng rd(s.data), rw(s.weights), rt(s.test);
    const Dataset data = sample_dataset(rd, n, d, target);
    const WeightMatrix w = sample_weights(rw, N, d);
    const TestSet test = sample_test_set(rt, target, cfg.n_test);

    // One set of kernels and cross-kernels per cell, shared by every lambda.
    const SymMatrix k_n = empirical_kernel(w, act, data.x);
    const SymMatrix k_p = poly_kernel_matrix(coeffs, data.x);
    const Matrix c_nt = cross_empirical(w, act, data.x, test.x);
    const Matrix c_p = cross_poly(coeffs, data.x, test.x);
    for (std::size_t l = 0; l < nl; ++l) {
      const double lambda = cfg.lambda[l];
      const double geff = gamma_eff(prof, cfg.ell, lambda);
      const FittedModel nt = fit_nt(k_n, data.y, lambda);
      const FittedModel prr = fit_prr(k_p, coeffs.gamma_above_ell, data.y, lambda);
      const FittedModel lin = fit_linear(data.x, data.y, geff);
      const double r_nt = risk_from_predictions(test, c_nt * nt.coef, "mc").total;
      const double r_prr = risk_from_predictions(test, c_p * prr.coef, "mc").total;
      const double r_lin = risk_from_predictions(test, test.x * lin.coef, "mc").total;
      blocks[task].push_back({std::string(sweep_N ? "N" : "n"), static_cast<std::int64_t>(grid[g]),
                              lambda, geff, static_cast<std::int64_t>(r), s.cell, r_nt, r_lin, r_prr});
    }
  });
  // Rows ordered by (grid, lambda, rep).
  for (std::size_t g = 0; g < ng; ++g) {
    for (std::size_t l = 0; l < nl; ++l) {
      for (std::size_t r = 0; r < reps; ++r) t.rows.push_back(blocks[g * reps + r][l]);
    }
  }
  return t;
}

ResultTable run_min_eig_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const Activation act = Activation::parse(cfg.activation, cfg.activation_param);
  const int d = cfg.d.front();
  const TargetSpec target = make_target(cfg, d);
  const std::uint64_t master = *cfg.seed;
  const KernelCoeffs coeffs = kernel_coeffs(act, d, cfg.ell, series_options(cfg));
  const double v = v_sigma(hermite_profile(act, std::max(4, cfg.ell + 1)), cfg.ell);

  ResultTable t;
  t.experiment = "min_eig_sweep";
  t.columns = {"N", "n", "rep", "seed", "lambda_min", "v_sigma", "conc_norm", "decomp_resid"};
  add_common_fixed(t, cfg, act);
  t.fixed.emplace_back("gamma_above_ell", format_double(coeffs.gamma_above_ell));
  t.fixed.emplace_back("k_max", std::to_string(coeffs.k_max));
  t.fixed.emplace_back("series_tail", format_double(coeffs.tail_bound()));

  const std::size_t nN = cfg.N.size(), nn = cfg.n.size(), reps = cfg.n_rep;
  std::vector<std::vector<Cell>> rows(nN * nn * reps);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t r = task % reps, j = (task / reps) % nn, i = task / (reps * nn);
    const long N = cfg.N[i], n = cfg.n[j];
    const Seeds s = cell_seeds(master, "min_eig_sweep", {i, j, r});
    Rng rd(s.data), rw(s.weights);
    const Dataset data = sample_dataset(rd, n, d, target);
    const WeightMatrix w = sample_weights(rw, N, d);
    const KernelBundle kb = build_kernels(w, act, coeffs, data.x);
    rows[task] = {static_cast<std::int64_t>(N), static_cast<std::int64_t>(n),
                  static_cast<std::int64_t>(r), s.cell, min_eigenvalue(kb.empirical), v,
                  concentration_norm(kb.infinite, kb.empirical),
                  decomposition_residual(kb.infinite, kb.poly, kb.gamma_above_ell)};
  });
  t.rows = std::move(rows);
  return t;
}

ResultTable run_nn_compare(const ExperimentConfig& cfg) {
  validate(cfg);
  const Activation act = Activation::parse(cfg.activation, cfg.activation_param);
  const int d = cfg.d.front();
  const long N = cfg.N.front();
  const TargetSpec target = make_target(cfg, d);
  const std::uint64_t master = *cfg.seed;
  const KernelCoeffs coeffs = kernel_coeffs(act, d, cfg.ell, series_options(cfg));

  ResultTable t;
  t.experiment = "nn_compare";
  t.columns = {"n", "sigma_eps", "rep", "seed", "r_nn", "r_nt", "r_prr", "final_train_loss",
               "alpha", "dist_nn_nt"};
  add_common_fixed(t, cfg, act);
  t.fixed.emplace_back("N", std::to_string(N));
  t.fixed.emplace_back("max_iters", std::to_string(cfg.max_iters));
  t.fixed.emplace_back("loss_tol", format_double(cfg.loss_tol));

  const std::size_t nn = cfg.n.size(), reps = cfg.n_rep, na = cfg.alpha.size();
  std::vector<std::vector<Cell>> rows(nn * reps * na);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t a = task % na, r = (task / na) % reps, j = task / (na * reps);
    const long n = cfg.n[j];
    // The alpha index is not part of the seed: every alpha trains from the
    // same data and the same initial directions.
    const Seeds s = cell_seeds(master, "nn_compare", {j, r});
    Rng rd(s.data), rw(s.weights), rt(s.test);
    const Dataset data = sample_dataset(rd, n, d, target);
    const TwoLayerNet init = init_symmetric(rw, N, d, cfg.alpha[a], act);
    const TestSet test = sample_test_set(rt, target, cfg.n_test);

    const WeightMatrix w = nt_weights(init);
    const SymMatrix k_n = empirical_kernel(w, act, data.x);
    const FittedModel nt = fit_nt(k_n, data.y, 0.0);
    const PredictionContext ctx = PredictionContext::for_nt(data.x, w, act);
    const SymMatrix k_p = poly_kernel_matrix(coeffs, data.x);
    const FittedModel prr = fit_prr(k_p, coeffs.gamma_above_ell, data.y, 0.0);

    TrainOptions opts;
    opts.step = cfg.step;
    opts.max_iters = cfg.max_iters;
    opts.loss_tol = cfg.loss_tol;
    const TrainResult tr = train_gd(init, data.x, data.y, opts);

    const double r_nn = risk_from_predictions(test, tr.net.forward(test.x), "mc").total;
    const double r_nt = risk_from_predictions(test, predict(nt, ctx, test.x), "mc").total;
    const double r_prr =
        risk_from_predictions(test, cross_poly(coeffs, data.x, test.x) * prr.coef, "mc").total;
    const double dist = compare_to_nt(tr.net, nt, ctx, test).total;
    rows[task] = {static_cast<std::int64_t>(n), cfg.sigma_eps, static_cast<std::int64_t>(r), s.cell,
                  r_nn, r_nt, r_prr, tr.losses.back(), cfg.alpha[a], dist};
  });
  t.rows = std::move(rows);
  return t;
}

ResultTable run_kernel_check(const ExperimentConfig& cfg) {
  validate(cfg);
  const Activation act = Activation::parse(cfg.activation, cfg.activation_param);

  ResultTable t;
  t.experiment = "kernel_check";
  t.columns = {"d", "key", "value", "bound"};
  add_common_fixed(t, cfg, act);
  const HermiteProfile prof = hermite_profile(act, std::max(4, cfg.ell + 1));

  std::vector<std::vector<std::vector<Cell>>> blocks(cfg.d.size());
  parallel_for(blocks.size(), cfg.threads, [&](std::size_t task) {
    const int d = cfg.d[task];
    const KernelCoeffs c = kernel_coeffs(act, d, cfg.ell, series_options(cfg));
    auto& out = blocks[task];
    const auto D = static_cast<std::int64_t>(d);
    const double tail = c.tail_bound();
    double sum = 0.0;
    for (std::size_t k = 0; k < c.gamma.size(); ++k) {
      out.push_back({D, "gamma_" + std::to_string(k), c.gamma[k], tail});
      sum += c.gamma[k];
    }
    // The d -> infinity limits: sqrt(B) lambda_1 -> mu_1, gamma_{>ell} -> v(sigma).
    out.push_back({D, std::string("lambda1_scaled"), c.normalized.at(1), prof.mu.at(1)});
    out.push_back({D, std::string("gamma_above_ell"), c.gamma_above_ell, v_sigma(prof, cfg.ell)});
    out.push_back({D, std::string("mass"), c.mass, prof.second_moment});
    out.push_back({D, std::string("gamma_sum_plus_tail"), sum + c.series_tail, c.mass});
    out.push_back({D, std::string("series_tail"), c.series_tail, 1e-8 * c.mass});
    out.push_back({D, std::string("k_max"), static_cast<double>(c.k_max), static_cast<double>(cfg.k_max)});
    if (act.kind == ActivationKind::ReLU) {
      double worst = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double tt = -d + 2.0 * d * i / 400.0;
        worst = std::max(worst, std::abs(kernel_eval(c, tt).value - arccos_kernel_relu(tt, d)));
      }
      out.push_back({D, std::string("arccos_max_abs_diff"), worst, tail + 0.01});
    }
  });
  for (auto& b : blocks) {
    for (auto& row : b) t.rows.push_back(std::move(row));
  }
  return t;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::PhaseHeatmap: return run_phase_heatmap(cfg);
    case ExperimentKind::GammaMatch: return run_gamma_match(cfg);
    case ExperimentKind::MinEigSweep: return run_min_eig_sweep(cfg);
    case ExperimentKind::NnCompare: return run_nn_compare(cfg);
    case ExperimentKind::KernelCheck: return run_kernel_check(cfg);
  }
  throw ConfigError("unknown experiment");
}

std::string write_outputs(const ResultTable& t, const std::string& out_dir, bool plot) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::system_error(ec, "cannot create output directory '" + out_dir + "'");
  const std::string base = (fs::path(out_dir) / t.experiment).string();
  emit_csv(t, base + ".csv");
  emit_params(t, base + "_params.csv");
  if (plot) emit_svg(t, base + ".svg");
  return base + ".csv";
}

}  // namespace ntk
