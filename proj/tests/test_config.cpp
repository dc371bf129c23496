#include <doctest.h>

#include <string>

#include "ntk/config.hpp"
#include "ntk/errors.hpp"

using namespace ntk;

namespace {

std::string error_of(const std::string& text, ExperimentKind kind) {
  try {
    parse_config(text, kind, "t.conf");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse a full section") {
  const std::string text = R"(# comment
[phase_heatmap]
d = 20
n = 100, 200   # trailing comment
N = 5, 10
lambda = 0, 0.5
activation = leaky_relu
activation_param = 0.2
n_rep = 3
seed = 123
plot = true

[gamma_match]
d = 50
n = 100
N = 10, 20
target = linear
seed = 1
)";
  const ExperimentConfig c = parse_config(text, ExperimentKind::PhaseHeatmap, "t.conf");
  CHECK(c.d == std::vector<int>{20});
  CHECK(c.n == std::vector<long>{100, 200});
  CHECK(c.N == std::vector<long>{5, 10});
  CHECK(c.lambda == std::vector<double>{0.0, 0.5});
  CHECK(c.activation_param == 0.2);
  CHECK(c.n_rep == 3);
  CHECK(*c.seed == 123);
  CHECK(c.plot);
  CHECK(c.key_lines.at("n") == 4);
  const ExperimentConfig g = parse_config(text, ExperimentKind::GammaMatch, "t.conf");
  CHECK(g.target == "linear");
  CHECK(g.d == std::vector<int>{50});
}

TEST_CASE("line-precise errors") {
  CHECK(error_of("[phase_heatmap]\nd = 20\nfoo = 1\n", ExperimentKind::PhaseHeatmap).find("t.conf:3") !=
        std::string::npos);
  CHECK(error_of("d = 20\n", ExperimentKind::PhaseHeatmap).find("outside") != std::string::npos);
  CHECK(error_of("[phase_heatmap]\nd = 20\nd = 30\n", ExperimentKind::PhaseHeatmap).find("t.conf:3") !=
        std::string::npos);
  CHECK(error_of("[phase_heatmap]\nd = twenty\n", ExperimentKind::PhaseHeatmap).find("t.conf:2") !=
        std::string::npos);
  CHECK(error_of("[nope]\n", ExperimentKind::PhaseHeatmap).find("unknown experiment") != std::string::npos);
  CHECK(error_of("[gamma_match]\nd=5\nn=1\nN=1\nseed=1\ntarget=linear\n", ExperimentKind::PhaseHeatmap)
            .find("no [phase_heatmap]") != std::string::npos);
}

TEST_CASE("validation") {
  const std::string base = "[phase_heatmap]\nd = 20\nn = 10\nN = 5\n";
  CHECK(error_of(base, ExperimentKind::PhaseHeatmap).find("seed") != std::string::npos);
  CHECK(error_of(base + "seed = 1\nn_rep = 0\n", ExperimentKind::PhaseHeatmap).find("t.conf:6") !=
        std::string::npos);
  CHECK(error_of(base + "seed = 1\nlambda = -1\n", ExperimentKind::PhaseHeatmap).find("lambda") !=
        std::string::npos);
  CHECK(error_of(base + "seed = 1\nactivation = swish\n", ExperimentKind::PhaseHeatmap).find("t.conf:6") !=
        std::string::npos);
  CHECK(error_of(base + "seed = 1\nell = 3\n", ExperimentKind::PhaseHeatmap).find("ell") != std::string::npos);
  CHECK(error_of("[phase_heatmap]\nd = 2\nn = 10\nN = 5\nseed = 1\n", ExperimentKind::PhaseHeatmap)
            .find("d") != std::string::npos);
  CHECK(error_of(base + "seed = 1\n", ExperimentKind::PhaseHeatmap).empty());

  const std::string gm = "[gamma_match]\nd = 20\nn = 10\nN = 5, 10\nseed = 1\n";
  CHECK(error_of(gm, ExperimentKind::GammaMatch).find("linear") != std::string::npos);
  CHECK(error_of(gm + "target = linear\n", ExperimentKind::GammaMatch).empty());

  const std::string nn = "[nn_compare]\nd = 20\nn = 10\nN = 5\nseed = 1\n";
  CHECK(error_of(nn, ExperimentKind::NnCompare).find("smooth") != std::string::npos);
  CHECK(error_of(nn + "activation = softplus\n", ExperimentKind::NnCompare).empty());

  CHECK(error_of("[kernel_check]\nd = 20, 50\nseed = 1\n", ExperimentKind::KernelCheck).empty());
}

TEST_CASE("experiment names round-trip") {
  for (auto k : {ExperimentKind::PhaseHeatmap, ExperimentKind::GammaMatch, ExperimentKind::MinEigSweep,
                 ExperimentKind::NnCompare, ExperimentKind::KernelCheck}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_experiment_kind("other").has_value());
}
