// hourglass: command-line front end for simulations, sweeps, trap studies,
// pattern learning and balance checks.
//
// Exit codes: 0 success, 1 internal error, 2 configuration error, 3 budget
// exceeded, 4 I/O error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hourglass/config.hpp"
#include "hourglass/errors.hpp"
#include "hourglass/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kBudgetError = 3;
constexpr int kIoError = 4;

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interacting renewal-process network simulator and analysis toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<std::string> out;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write stats and pattern files");
  simulate->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
  simulate->add_option("--seed", seed, "Override run.seed");
  simulate->add_option("--horizon", horizon, "Override run.horizon");
  simulate->add_option("--out", out, "Override output.dir");

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "Run a replicated parameter grid");
  sweep->add_option("-c,--config", sweep_path, "Sweep spec (JSON)")->required();

  auto* traps = app.add_subcommand("traps", "List the traps of a network and their patterns");
  traps->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();

  std::string patterns_path;
  double a = 1.0, A = 0.0, B = 0.0;
  std::string learn_out = "learned";
  auto* learn = app.add_subcommand("learn", "Learn connections that store a pattern family");
  learn->add_option("-p,--patterns", patterns_path, "Pattern family (JSON)")->required();
  learn->add_option("--a", a, "Mean self-characteristic E Y")->required();
  learn->add_option("--A", A, "Correlation weight")->required();
  learn->add_option("--B", B, "Uniform inhibition weight")->required();
  learn->add_option("--out", learn_out, "Output directory");

  std::optional<double> wE;
  auto* balance = app.add_subcommand("balance", "Balance residual of the excitatory subsystem");
  balance->add_option("-c,--config", config_path, "Torus experiment config (JSON)")->required();
  balance->add_option("--wE", wE, "Excitatory weight (default: connections.w_E)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (simulate->parsed()) {
      const auto config = hourglass::apply_overrides(hourglass::load_config(config_path),
                                                     {seed, horizon, out});
      print_paths(hourglass::cmd_simulate(config));
    } else if (sweep->parsed()) {
      print_paths(hourglass::cmd_sweep(hourglass::load_sweep(sweep_path)));
    } else if (traps->parsed()) {
      std::cout << hourglass::cmd_traps(hourglass::load_config(config_path));
    } else if (learn->parsed()) {
      print_paths(hourglass::cmd_learn(patterns_path, a, A, B, learn_out));
    } else if (balance->parsed()) {
      std::cout << hourglass::cmd_balance(hourglass::load_config(config_path), wE);
    }
  } catch (const hourglass::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const hourglass::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudgetError;
  } catch (const hourglass::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
