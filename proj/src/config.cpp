#include "ntk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "ntk/activations.hpp"
#include "ntk/errors.hpp"

namespace ntk {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PhaseHeatmap: return "phase_heatmap";
    case ExperimentKind::GammaMatch: return "gamma_match";
    case ExperimentKind::MinEigSweep: return "min_eig_sweep";
    case ExperimentKind::NnCompare: return "nn_compare";
    case ExperimentKind::KernelCheck: return "kernel_check";
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::PhaseHeatmap, ExperimentKind::GammaMatch,
                 ExperimentKind::MinEigSweep, ExperimentKind::NnCompare,
                 ExperimentKind::KernelCheck}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct Ctx {
  const std::string& source;
  int line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(source + ":" + std::to_string(line) + ": key '" + key + "': " + what);
  }
};

template <typename T>
T parse_number(const Ctx& ctx, const std::string& s) {
  T v{};
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) ctx.fail("cannot parse '" + s + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) ctx.fail("value must be finite");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const Ctx& ctx, const std::string& v) {
  std::vector<T> out;
  for (const auto& item : split_list(v)) out.push_back(parse_number<T>(ctx, item));
  if (out.empty()) ctx.fail("list must not be empty");
  return out;
}

bool parse_bool(const Ctx& ctx, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  ctx.fail("expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const Ctx&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"d", [](auto& c, auto& x, auto& v) { c.d = parse_list<int>(x, v); }},
      {"n", [](auto& c, auto& x, auto& v) { c.n = parse_list<long>(x, v); }},
      {"N", [](auto& c, auto& x, auto& v) { c.N = parse_list<long>(x, v); }},
      {"lambda", [](auto& c, auto& x, auto& v) { c.lambda = parse_list<double>(x, v); }},
      {"ell", [](auto& c, auto& x, auto& v) { c.ell = parse_number<int>(x, v); }},
      {"activation", [](auto& c, auto&, auto& v) { c.activation = v; }},
      {"activation_param",
       [](auto& c, auto& x, auto& v) { c.activation_param = parse_number<double>(x, v); }},
      {"target", [](auto& c, auto&, auto& v) { c.target = v; }},
      {"target_coeffs",
       [](auto& c, auto& x, auto& v) { c.target_coeffs = parse_list<double>(x, v); }},
      {"sigma_eps", [](auto& c, auto& x, auto& v) { c.sigma_eps = parse_number<double>(x, v); }},
      {"n_rep", [](auto& c, auto& x, auto& v) { c.n_rep = parse_number<int>(x, v); }},
      {"n_test", [](auto& c, auto& x, auto& v) { c.n_test = parse_number<long>(x, v); }},
      {"seed", [](auto& c, auto& x, auto& v) { c.seed = parse_number<std::uint64_t>(x, v); }},
      {"out", [](auto& c, auto&, auto& v) { c.out = v; }},
      {"plot", [](auto& c, auto& x, auto& v) { c.plot = parse_bool(x, v); }},
      {"threads", [](auto& c, auto& x, auto& v) { c.threads = parse_number<int>(x, v); }},
      {"grid_var", [](auto& c, auto&, auto& v) { c.grid_var = v; }},
      {"alpha", [](auto& c, auto& x, auto& v) { c.alpha = parse_list<double>(x, v); }},
      {"step", [](auto& c, auto& x, auto& v) { c.step = parse_number<double>(x, v); }},
      {"max_iters", [](auto& c, auto& x, auto& v) { c.max_iters = parse_number<long>(x, v); }},
      {"loss_tol", [](auto& c, auto& x, auto& v) { c.loss_tol = parse_number<double>(x, v); }},
      {"k_max", [](auto& c, auto& x, auto& v) { c.k_max = parse_number<int>(x, v); }},
      {"k_max_auto", [](auto& c, auto& x, auto& v) { c.k_max_auto = parse_bool(x, v); }},
      {"test_cap", [](auto& c, auto& x, auto& v) { c.test_cap = parse_number<double>(x, v); }},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, ExperimentKind kind, std::string source) {
  std::map<std::string, ExperimentConfig> sections;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      current = trim(line.substr(1, line.size() - 2));
      const auto k = parse_experiment_kind(current);
      if (!k) throw ConfigError(where + "unknown experiment section '" + current + "'");
      if (sections.count(current)) throw ConfigError(where + "duplicate section '" + current + "'");
      sections[current].experiment = *k;
      sections[current].source = source;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (current.empty()) throw ConfigError(where + "key '" + key + "' outside of any section");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
    ExperimentConfig& cfg = sections[current];
    if (cfg.key_lines.count(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    cfg.key_lines[key] = line_no;
    it->second(cfg, Ctx{source, line_no, key}, value);
  }
  const auto sec = sections.find(to_string(kind));
  if (sec == sections.end()) {
    throw ConfigError(source + ": no [" + std::string(to_string(kind)) + "] section");
  }
  validate(sec->second);
  return sec->second;
}

ExperimentConfig load_config(const std::string& path, ExperimentKind kind) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), kind, path);
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [&](const std::string& key, const std::string& what) {
    const auto it = cfg.key_lines.find(key);
    const std::string where =
        it == cfg.key_lines.end() ? cfg.source + ": " : cfg.source + ":" + std::to_string(it->second) + ": ";
    throw ConfigError(where + "key '" + key + "': " + what);
  };
  const bool kernel_check = cfg.experiment == ExperimentKind::KernelCheck;
  if (cfg.d.empty()) fail("d", "required");
  for (int d : cfg.d) {
    if (d < 3) fail("d", "dimension must be >= 3");
  }
  if (!kernel_check && cfg.d.size() != 1) fail("d", "this experiment takes a single d");
  if (!kernel_check) {
    if (cfg.n.empty()) fail("n", "required");
    if (cfg.N.empty()) fail("N", "required");
    for (long v : cfg.n) {
      if (v < 1) fail("n", "sample sizes must be >= 1");
    }
    for (long v : cfg.N) {
      if (v < 1) fail("N", "neuron counts must be >= 1");
    }
  }
  if (cfg.lambda.empty()) fail("lambda", "list must not be empty");
  for (double l : cfg.lambda) {
    if (l < 0.0) fail("lambda", "regularization must be >= 0");
  }
  if (cfg.ell != 1 && cfg.ell != 2) fail("ell", "supported degrees are 1 and 2");
  if (cfg.n_rep < 1) fail("n_rep", "must be >= 1");
  if (cfg.n_test < 100) fail("n_test", "must be >= 100");
  if (!cfg.seed) fail("seed", "required (no wall-clock seeding)");
  if (cfg.threads < 1) fail("threads", "must be >= 1");
  if (cfg.sigma_eps < 0.0) fail("sigma_eps", "must be >= 0");
  if (cfg.target != "paper" && cfg.target != "linear" && cfg.target != "hermite") {
    fail("target", "expected paper, linear or hermite");
  }
  if (cfg.target == "hermite" && cfg.target_coeffs.empty()) {
    fail("target_coeffs", "required for target = hermite");
  }
  Activation act;
  try {
    act = Activation::parse(cfg.activation, cfg.activation_param);
  } catch (const ConfigError& e) {
    fail("activation", e.what());
  }
  if (cfg.k_max < cfg.ell + 2) fail("k_max", "must be >= ell + 2");
  if (!(cfg.test_cap > 0.0)) fail("test_cap", "must be > 0");

  switch (cfg.experiment) {
    case ExperimentKind::GammaMatch:
      if (cfg.target != "linear") fail("target", "gamma_match requires target = linear");
      if (cfg.ell != 1) fail("ell", "gamma_match requires ell = 1");
      if (cfg.grid_var != "N" && cfg.grid_var != "n") fail("grid_var", "expected N or n");
      if (cfg.grid_var == "N" && cfg.n.size() != 1) fail("n", "single n when sweeping N");
      if (cfg.grid_var == "n" && cfg.N.size() != 1) fail("N", "single N when sweeping n");
      break;
    case ExperimentKind::NnCompare:
      if (cfg.N.size() != 1) fail("N", "nn_compare takes a single N");
      if (cfg.alpha.empty()) fail("alpha", "list must not be empty");
      for (double a : cfg.alpha) {
        if (!(a > 0.0)) fail("alpha", "scales must be > 0");
      }
      if (cfg.max_iters < 1) fail("max_iters", "must be >= 1");
      if (!act.smooth()) fail("activation", "nn_compare needs a smooth activation");
      break;
    default:
      break;
  }
}

}  // namespace ntk
