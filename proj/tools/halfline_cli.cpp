#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "halfline/commands.hpp"
#include "halfline/config.hpp"

using namespace halfline;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string regime;
  std::string n_list;
  std::string out = "-";
  std::optional<std::uint64_t> seed;
  std::optional<double> t, u;
  std::optional<int> K, J;
  std::optional<unsigned> threads;
  std::optional<std::size_t> paths;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "INI experiment configuration");
  sub->add_option("--regime", f.regime, "boundary parameters, e.g. alpha=2,beta=1,A=1,B=1");
  sub->add_option("--n", f.n_list, "comma separated lattice scales");
  sub->add_option("--t", f.t, "time horizon");
  sub->add_option("--u", f.u, "start point of the limit process");
  sub->add_option("--K", f.K, "family truncation in k");
  sub->add_option("--J", f.J, "family truncation in j");
  sub->add_option("--seed", f.seed, "master random seed");
  sub->add_option("--paths", f.paths, "Monte Carlo path count");
  sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--out", f.out, "output CSV path, '-' for stdout");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  if (!f.regime.empty()) apply_regime_override(cfg, f.regime);
  if (!f.n_list.empty()) cfg.ns = parse_n_list(f.n_list);
  if (f.t) cfg.t = *f.t;
  if (f.u) cfg.u = *f.u;
  if (f.K) cfg.K = *f.K;
  if (f.J) cfg.J = *f.J;
  if (f.seed) cfg.seed = *f.seed;
  if (f.paths) cfg.paths = *f.paths;
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary random walks and general Brownian motions on the half-line"};
  app.require_subcommand(1);
  CommonFlags flags;
  bool monte_carlo = false;
  int sample_lattice = 0;
  std::string mu_path, nu_path;

  auto* simulate = app.add_subcommand("simulate", "sample one exact path of the walk");
  auto* distribution = app.add_subcommand("distribution", "law of the walk at time t");
  auto* reference = app.add_subcommand("reference", "law of the limit process at time t");
  auto* rate = app.add_subcommand("rate", "rate ladder against the limit law");
  auto* rate_killed = app.add_subcommand("rate-killed", "shifted walk against killed motion");
  auto* metric = app.add_subcommand("metric", "distance d between two stored laws");
  auto* hyp = app.add_subcommand("check-hypotheses", "growth, generator and correction checks");
  for (auto* sub : {simulate, distribution, reference, rate, rate_killed, metric, hyp})
    add_common(sub, flags);
  distribution->add_flag("--mc", monte_carlo, "estimate by Monte Carlo instead");
  reference->add_option("--sample-lattice", sample_lattice, "embed onto the lattice of scale n");
  metric->add_option("--mu", mu_path, "first law (CSV)")->required();
  metric->add_option("--nu", nu_path, "second law (CSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    const ExperimentConfig cfg = resolve(flags);
    // Keep standard output clean when the CSV itself goes there.
    std::ostream& msg = flags.out == "-" ? std::cerr : std::cout;
    if (*simulate) return cmd_simulate(cfg, flags.out, msg);
    if (*distribution) return cmd_distribution(cfg, flags.out, monte_carlo, msg);
    if (*reference) return cmd_reference(cfg, flags.out, sample_lattice, msg);
    if (*rate) return cmd_rate(cfg, flags.out, msg);
    if (*rate_killed) return cmd_rate_killed(cfg, flags.out, msg);
    if (*metric) return cmd_metric(cfg, mu_path, nu_path, flags.out, msg);
    if (*hyp) return cmd_check_hypotheses(cfg, flags.out, msg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return kExitOk;
}
