#include <doctest.h>

#include <cmath>

#include "ntk/config.hpp"
#include "ntk/experiments.hpp"
#include "ntk/table.hpp"

using namespace ntk;

namespace {

ExperimentConfig cfg_of(const std::string& text, ExperimentKind kind) {
  return parse_config(text, kind, "test");
}

}  // namespace

TEST_CASE("parallel_for covers every index and reports the first failure") {
  std::vector<int> hit(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 7 || i == 3) throw std::runtime_error("task " + std::to_string(i));
                                 }),
                    "task 3");
}

TEST_CASE("phase_heatmap: schema, singular cells, thread invariance") {
  const std::string text = "[phase_heatmap]\nd = 10\nn = 40\nN = 2, 8\nn_rep = 3\nn_test = 200\nseed = 4\n";
  ExperimentConfig c = cfg_of(text, ExperimentKind::PhaseHeatmap);
  const ResultTable t1 = run_phase_heatmap(c);
  CHECK(t1.columns == std::vector<std::string>{"N", "n", "rep", "seed", "singular", "train_err",
                                               "test_err_raw", "test_err_capped"});
  REQUIRE(t1.rows.size() == 6);
  for (std::size_t r = 0; r < t1.rows.size(); ++r) {
    const bool under = t1.number(r, "N") * 10 < t1.number(r, "n");
    CHECK(t1.number(r, "singular") == (under ? 1.0 : 0.0));
    if (!under) CHECK(t1.number(r, "train_err") < 1e-6);
    CHECK(t1.number(r, "test_err_capped") <= 2.0);
    CHECK(std::isfinite(t1.number(r, "test_err_raw")));
  }
  c.threads = 4;
  const ResultTable t4 = run_phase_heatmap(c);
  CHECK(to_csv(t1) == to_csv(t4));
  // Fixed parameters travel with the table; the config itself is untouched.
  CHECK(c.n_rep == 3);
}

TEST_CASE("gamma_match: ReLU at lambda = 0 has gamma_eff = 1") {
  const std::string text =
      "[gamma_match]\nd = 20\nn = 60\nN = 30, 60\nlambda = 0, 0.25\ntarget = linear\nn_test = 500\nseed = 2\n";
  const ResultTable t = run_gamma_match(cfg_of(text, ExperimentKind::GammaMatch));
  REQUIRE(t.rows.size() == 4);
  CHECK(t.number(0, "lambda") == 0.0);
  CHECK(t.number(0, "gamma_eff") == doctest::Approx(1.0));
  CHECK(t.number(1, "gamma_eff") == doctest::Approx(2.0));
  CHECK(std::get<std::string>(t.rows[0][0]) == "N");
}

TEST_CASE("min_eig_sweep: v_sigma column and singular rows") {
  const std::string text = "[min_eig_sweep]\nd = 10\nn = 50\nN = 3, 40\nn_rep = 2\nseed = 9\n";
  const ResultTable t = run_min_eig_sweep(cfg_of(text, ExperimentKind::MinEigSweep));
  REQUIRE(t.rows.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(t.number(r, "v_sigma") == doctest::Approx(0.25));
    if (t.number(r, "N") == 3) CHECK(std::abs(t.number(r, "lambda_min")) < 1e-8);
  }
}

TEST_CASE("nn_compare and kernel_check run end to end") {
  const std::string nn =
      "[nn_compare]\nd = 8\nn = 20\nN = 40\nactivation = softplus\ntarget = linear\nalpha = 4\n"
      "n_test = 200\nmax_iters = 2000\nloss_tol = 1e-6\nseed = 3\n";
  const ResultTable t = run_nn_compare(cfg_of(nn, ExperimentKind::NnCompare));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.columns.size() == 10);
  CHECK(t.number(0, "final_train_loss") <= 1e-6);
  CHECK(t.number(0, "dist_nn_nt") < 0.1 * t.number(0, "r_nt"));

  const ResultTable k = run_kernel_check(cfg_of("[kernel_check]\nd = 10, 20\nseed = 1\n", ExperimentKind::KernelCheck));
  CHECK(k.columns == std::vector<std::string>{"d", "key", "value", "bound"});
  CHECK(k.rows.size() > 10);
}

TEST_CASE("seeds in rows replay single cells") {
  const std::string text = "[min_eig_sweep]\nd = 10\nn = 30\nN = 20\nn_rep = 2\nseed = 5\n";
  const ResultTable a = run_min_eig_sweep(cfg_of(text, ExperimentKind::MinEigSweep));
  CHECK(a.number(0, "seed") != a.number(1, "seed"));
  const ResultTable b = run_min_eig_sweep(cfg_of(text, ExperimentKind::MinEigSweep));
  CHECK(to_csv(a) == to_csv(b));
}
