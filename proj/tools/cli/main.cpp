#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "susyinv/errors.hpp"

using namespace susyinv::cli;

int main(int argc, char** argv) {
  CLI::App app{"Supersymmetric invariants and exactly solvable partner Hamiltonians"};
  app.require_subcommand(1);

  std::string config_path;
  CommonOptions opts;
  std::string out_dir;
  double level = 0.0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", opts.seed, "seed for randomized suites");
    sub->add_option("--tolerance-scale", opts.tolerance_scale, "multiply every tolerance")
        ->check(CLI::PositiveNumber);
  };

  auto* build = app.add_subcommand("build", "sample H-, U- and the I- spectrum");
  auto* verify = app.add_subcommand("verify", "run the residual checks");
  auto* propagate = app.add_subcommand("propagate", "numeric vs closed-form partner solution");
  auto* phase = app.add_subcommand("phase", "holonomies of I- levels over a closed loop");
  auto* sweep = app.add_subcommand("sweep", "verify over a list of values of one key");
  for (auto* sub : {build, verify, propagate, phase, sweep}) common(sub);
  verify->add_flag("--cross-check-wrong-H", opts.wrong_hamiltonian,
                   "check I- against H+ instead of H- (negative control)");
  auto* level_opt = propagate->add_option("--level", level, "plus level: m for spins, n for oscillators");
  phase->add_flag("--reverse", opts.reverse, "traverse the loop backwards");
  sweep->add_option("--threads", opts.threads, "worker count (default SUSYINV_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; every usage error is a config error.
    const int code = app.exit(e);
    return code == 0 ? 0 : susyinv::cli::kConfigError;
  }
  if (!out_dir.empty()) opts.out_dir = out_dir;
  if (level_opt->count() > 0) opts.level = level;

  try {
    if (sweep->parsed()) return cmd_sweep(config_path, opts, std::cout);
    const RunConfig config = load_config(config_path);
    if (build->parsed()) return cmd_build(config, opts, std::cout);
    if (verify->parsed()) return cmd_verify(config, opts, std::cout);
    if (propagate->parsed()) return cmd_propagate(config, opts, std::cout);
    if (phase->parsed()) return cmd_phase(config, opts, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const susyinv::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kConfigError;
}
