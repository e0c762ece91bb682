#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "experiment.hpp"

int main(int argc, char** argv) {
  using namespace plv::cli;

  CLI::App app{"Projected Langevin sampling over polyhedral constraint sets"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand name

  std::string config_path;
  CliOptions opt;
  app.add_option("--config", config_path, "Experiment config file (key = value sections)");
  app.add_option("--out-dir", opt.out_dir, "Output directory (default: out)");
  auto* seed_opt = app.add_option("--seed", opt.seed, "Base seed, overrides the config");
  app.add_option("--replicas", opt.replicas, "Replica count, overrides the config");
  app.add_option("--workers", opt.workers, "Worker threads (default: hardware concurrency)");
  app.add_flag("--strict-eta", opt.strict_eta,
               "Refuse step sizes violating eta <= min{1/4, mu/(4 ell^2)}");

  struct Sub {
    const char* name;
    const char* desc;
    int (*fn)(const Config&, const CliOptions&);
  };
  const Sub subs[] = {
      {"constants", "Write the constant ledger and Skorokhod constants", cmd_constants},
      {"rate", "Sweep T with the eta = log T / (2aT) schedule and fit the W1 slope", cmd_rate},
      {"skorokhod-check", "Random path sweep of the reflection-map Lipschitz bound",
       cmd_skorokhod_check},
      {"averaging-check", "Partial-averaging distance vs the mixing bound", cmd_averaging_check},
      {"coupling", "Reflection-coupled pairs: contraction of E[delta] and coupling fraction",
       cmd_coupling},
      {"gibbs-check", "Long-run fine trajectory vs the quadrature Gibbs reference",
       cmd_gibbs_check},
      {"sample", "Dump one realization of every coupled process as CSV", cmd_sample},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.desc);

  CLI11_PARSE(app, argc, argv);
  opt.seed_given = seed_opt->count() > 0;

  try {
    Config cfg = config_path.empty() ? Config::from_string("", "<none>")
                                     : Config::load(config_path);
    for (const auto& s : subs) {
      if (app.got_subcommand(s.name)) return s.fn(cfg, opt);
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  }
}
