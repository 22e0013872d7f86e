#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "signorini/cli.hpp"

namespace cli = signorini::cli;

namespace {

int report_config_error(const cli::ConfigError& e, const std::string& path) {
  std::cerr << path << ": " << e.what() << '\n';
  return cli::exit_code(cli::RunStatus::config_error);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signorini contact solver and verification runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  auto* seed_opt = run->add_option("--seed", seed, "Random seed (overrides seed)");

  auto* check = app.add_subcommand("validate-config", "Parse and validate a config file");
  check->add_option("--config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_code(cli::RunStatus::config_error);
  }

  cli::ExperimentConfig cfg;
  try {
    cfg = cli::load_config(config_path);
  } catch (const cli::ConfigError& e) {
    return report_config_error(e, config_path);
  }

  if (check->parsed()) {
    std::cout << config_path << ": ok (" << cli::to_string(cfg.experiment) << ")\n";
    return 0;
  }

  if (*out_opt) cfg.output_dir = out_dir;
  if (*seed_opt) cfg.seed = seed;

  const cli::RunResult result = cli::run_experiment(cfg, cfg.output_dir);
  std::cout << cli::to_string(cfg.experiment) << ": " << cli::to_string(result.status) << '\n';
  for (const auto& [k, v] : result.summary) std::cout << "  " << k << " = " << v << '\n';
  if (!result.message.empty()) std::cerr << result.message << '\n';
  std::cout << "  outputs in " << cfg.output_dir << '\n';
  return cli::exit_code(result.status);
}
