#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ntk {

enum class ExperimentKind { PhaseHeatmap, GammaMatch, MinEigSweep, NnCompare, KernelCheck };

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

// One experiment's parameters. Read from a flat key = value file with one
// [section] per experiment; see README for the key list.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::PhaseHeatmap;
  std::vector<int> d;
  std::vector<long> n;
  std::vector<long> N;
  std::vector<double> lambda{0.0};
  int ell = 1;
  std::string activation = "relu";
  double activation_param = std::numeric_limits<double>::quiet_NaN();
  std::string target = "paper";  // paper | linear | hermite
  std::vector<double> target_coeffs;
  double sigma_eps = 0.5;
  int n_rep = 1;
  long n_test = 4000;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  bool plot = false;
  int threads = 1;

  std::string grid_var = "N";  // gamma_match: which of N, n is swept
  std::vector<double> alpha{16.0};
  double step = 0.0;  // nn_compare: <= 0 picks 1/L automatically
  long max_iters = 50000;
  double loss_tol = 1e-8;
  int k_max = 60;
  bool k_max_auto = true;
  double test_cap = 2.0;

  // Line numbers of keys as read, for error messages.
  std::map<std::string, int> key_lines;
  std::string source = "<config>";
};

// Parses `text` and returns the section for `kind`. Unknown keys, malformed
// values and missing sections raise ConfigError naming source:line.
ExperimentConfig parse_config(std::string_view text, ExperimentKind kind,
                              std::string source = "<config>");
ExperimentConfig load_config(const std::string& path, ExperimentKind kind);

// Checks the invariants every run_* function relies on.
void validate(const ExperimentConfig& cfg);

}  // namespace ntk
