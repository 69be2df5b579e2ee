// Command-line front end: optimize, simulate, sweep-beta, validate.

#include "qutrit/harness.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Source {
  std::string preset;
  std::string config;
  std::string out;
};

void add_source(CLI::App* cmd, Source& src, bool require) {
  auto* p = cmd->add_option("--preset", src.preset, "built-in scenario");
  auto* c = cmd->add_option("--config", src.config, "key-value config file");
  p->excludes(c);
  c->excludes(p);
  if (require) {
    auto* g = cmd->add_option_group("source");
    g->add_option(p);
    g->add_option(c);
    g->require_option(1);
  }
  cmd->add_option("--out", src.out, "output directory (overrides the config)");
}

qutrit::ScenarioConfig resolve(const Source& src, const std::string& fallback_preset = {}) {
  qutrit::ScenarioConfig cfg;
  if (!src.config.empty()) {
    cfg = qutrit::load_config(src.config);
  } else {
    cfg = qutrit::preset(src.preset.empty() ? fallback_preset : src.preset);
  }
  if (!src.out.empty()) cfg.output_dir = src.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of an open qutrit with coherent and incoherent controls"};
  app.require_subcommand(1);

  Source opt_src;
  std::string method;
  auto* optimize = app.add_subcommand("optimize", "run one optimization and write CSV outputs");
  add_source(optimize, opt_src, true);
  optimize->add_option("--method", method, "gpm1 | gpm2 | gpm3 | rkm");

  Source sim_src;
  auto* simulate = app.add_subcommand("simulate", "forward-only run of the initial guess");
  add_source(simulate, sim_src, true);

  Source sweep_src;
  std::vector<double> alphas{1.0, 5.0};
  std::vector<double> betas = qutrit::default_sweep_betas();
  std::size_t threads = 0;
  auto* sweep = app.add_subcommand("sweep-beta", "GPM-2 complexity over a grid of (alpha, beta)");
  add_source(sweep, sweep_src, false);
  sweep->add_option("--alpha", alphas, "step sizes (default 1 5)");
  sweep->add_option("--beta", betas, "momentum values (default 0.1, 0.15, ..., 0.9)");
  sweep->add_option("--threads", threads, "worker threads, 0 = all cores");

  qutrit::ValidateOptions vopts;
  auto* validate = app.add_subcommand("validate", "run the built-in consistency checks");
  validate->add_flag("--corrupt-generator", vopts.corrupt_generator,
                     "perturb one drift entry (negative control)");
  validate->add_option("--seed", vopts.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? qutrit::kExitOk : qutrit::kExitConfigError;
  }

  try {
    if (*optimize) {
      qutrit::ScenarioConfig cfg = resolve(opt_src);
      if (!method.empty()) {
        const auto m = qutrit::parse_method(method);
        if (!m) throw qutrit::ConfigError("unknown method '" + method + "'", 0, "method");
        cfg.method = *m;
      }
      cfg.validate();
      return qutrit::cmd_optimize(cfg, std::cout).exit_code;
    }
    if (*simulate) {
      return qutrit::cmd_simulate(resolve(sim_src), std::cout);
    }
    if (*sweep) {
      qutrit::ScenarioConfig cfg = resolve(sweep_src, "5.1");
      cfg.method = qutrit::Method::GPM2;
      const auto result = qutrit::cmd_sweep_beta(cfg, alphas, betas, threads, true, std::cout);
      for (const auto& p : result.points) {
        if (!p.complexity) return qutrit::kExitNotConverged;
      }
      return qutrit::kExitOk;
    }
    if (*validate) {
      const auto checks = qutrit::cmd_validate(vopts, std::cout);
      for (const auto& c : checks) {
        if (!c.passed) return qutrit::kExitConfigError;
      }
      return qutrit::kExitOk;
    }
  } catch (const qutrit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return qutrit::kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return qutrit::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qutrit::kExitConfigError;
  }
  return qutrit::kExitOk;
}
