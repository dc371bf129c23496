#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ntk/config.hpp"
#include "ntk/sampling.hpp"
#include "ntk/table.hpp"

namespace ntk {

// Runs task(i) for i in [0, count) on `threads` workers. Results are indexed
// by task, so ordering never depends on scheduling. The exception of the
// lowest failing task is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

// Target for the config, with beta* drawn from the master seed.
TargetSpec make_target(const ExperimentConfig& cfg, int d);

ResultTable run_phase_heatmap(const ExperimentConfig& cfg);
ResultTable run_gamma_match(const ExperimentConfig& cfg);
ResultTable run_min_eig_sweep(const ExperimentConfig& cfg);
ResultTable run_nn_compare(const ExperimentConfig& cfg);
ResultTable run_kernel_check(const ExperimentConfig& cfg);
ResultTable run_experiment(const ExperimentConfig& cfg);

// Writes <out>/<experiment>.csv, <experiment>_params.csv and, when plotting,
// <experiment>.svg. Returns the CSV path.
std::string write_outputs(const ResultTable& t, const std::string& out_dir, bool plot);

}  // namespace ntk
