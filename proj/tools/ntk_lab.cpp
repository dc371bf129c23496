// Command-line runner: one subcommand per experiment.
//   ntk_lab <experiment> --config FILE [--seed U64] [--out DIR] [--threads K] [--plot]
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "ntk/config.hpp"
#include "ntk/errors.hpp"
#include "ntk/experiments.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool plot = false;
};

int run(ntk::ExperimentKind kind, const Flags& f) {
  ntk::ExperimentConfig cfg = ntk::load_config(f.config, kind);
  if (f.seed) cfg.seed = f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.threads) cfg.threads = *f.threads;
  if (f.plot) cfg.plot = true;
  ntk::validate(cfg);
  const ntk::ResultTable t = ntk::run_experiment(cfg);
  const std::string path = ntk::write_outputs(t, cfg.out, cfg.plot);
  std::cout << t.experiment << ": " << t.rows.size() << " rows -> " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NT kernel regression experiments"};
  app.require_subcommand(1);
  Flags flags;
  std::optional<ntk::ExperimentKind> chosen;
  for (auto kind : {ntk::ExperimentKind::PhaseHeatmap, ntk::ExperimentKind::GammaMatch,
                    ntk::ExperimentKind::MinEigSweep, ntk::ExperimentKind::NnCompare,
                    ntk::ExperimentKind::KernelCheck}) {
    auto* sub = app.add_subcommand(ntk::to_string(kind));
    sub->add_option("--config", flags.config, "config file")->required();
    sub->add_option("--seed", flags.seed, "master seed (overrides the config)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--plot", flags.plot, "also write an SVG");
    sub->callback([&chosen, kind] { chosen = kind; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run(*chosen, flags);
  } catch (const ntk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ntk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
