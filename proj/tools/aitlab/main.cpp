#include <iostream>

#include "CLI11.hpp"
#include "aitlab/cli/commands.hpp"

using namespace aitlab;

int main(int argc, char** argv) {
  CLI::App app{"Insider-trading log-utility experiments: Monte Carlo vs closed forms"};
  app.require_subcommand(1);

  cli::CommandOptions opts;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "experiment config file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out-dir", out_dir, "directory for CSV/SVG output");
  };
  auto* validate = app.add_subcommand("validate", "run the identity and invariant suite");
  auto* compare = app.add_subcommand("compare", "Monte Carlo vs closed forms, with diff in SE");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates only");
  auto* temporal = app.add_subcommand("temporal-value", "solve for the temporal value of information d*");
  auto* sweep = app.add_subcommand("sweep", "d* over a range of a or xi, CSV + SVG");
  add_common(validate, false);
  for (auto* s : {compare, simulate, temporal, sweep}) add_common(s, true);

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* s : {validate, compare, simulate, temporal, sweep}) {
      if (s->count("--seed") > 0) opts.seed = seed;
    }
    opts.out_dir = out_dir;
    if (*validate) return cli::run_validate(opts, std::cout);
    const auto cfg = cli::load_config(config_path);
    if (*compare) return cli::run_compare(cfg, opts, std::cout);
    if (*simulate) return cli::run_simulate(cfg, opts, std::cout);
    if (*temporal) return cli::run_temporal_value(cfg, opts, std::cout);
    if (*sweep) return cli::run_sweep(cfg, opts, std::cout);
  } catch (const InadmissibleModel& e) {
    std::cerr << "inadmissible model: " << e.what() << '\n';
    return cli::kExitInadmissible;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return cli::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitTolerance;
  }
  return cli::kExitOk;
}
