#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "space/core/instance_io.hpp"
#include "space/envs/sampling.hpp"
#include "space/harness/config.hpp"
#include "space/harness/experiment.hpp"

namespace {

using namespace space;

int train(const std::string& config_path, const std::string& seed_list, const std::string& out) {
  auto config = harness::read_config(config_path);
  if (!seed_list.empty()) config.seeds = harness::parse_seed_list(seed_list);
  if (!out.empty()) config.output_dir = out;
  config.validate();
  const auto artifacts = harness::run_experiment(config);
  for (const auto& seed : artifacts.seeds) {
    const auto& last = seed.curve.back();
    std::cout << "seed " << seed.seed << ": episodes " << seed.episodes << ", env steps "
              << seed.env_steps << ", final train return " << last.train_mean_return
              << ", final test return " << last.test_mean_return << '\n';
  }
  std::cout << "wrote " << artifacts.files.size() << " files to " << artifacts.output_dir << '\n';
  return 0;
}

int sweep(const std::string& config_path, const std::vector<double>& etas,
          const std::vector<std::size_t>& kappas, const std::string& out) {
  auto config = harness::read_config(config_path);
  if (!out.empty()) config.output_dir = out;
  const auto cells = harness::ablation_sweep(config, etas, kappas);
  std::cout << harness::format_sweep_table(cells, etas, kappas);
  return 0;
}

int analyze(const std::string& run_dir) {
  std::cout << harness::analyze_run(run_dir);
  return 0;
}

int gen_instances(const std::string& env, std::size_t n, std::uint64_t seed,
                  const std::string& out) {
  const auto kind = envs::env_kind_from_string(env);
  write_instance_set(out, envs::sample_instances(kind, n, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-paced context evaluation curricula for contextual RL"};
  app.require_subcommand(1);

  std::string config_path;
  std::string seed_list;
  std::string out;
  auto* train_cmd = app.add_subcommand("train", "Run one experiment over all configured seeds");
  train_cmd->add_option("--config", config_path, "Config file")->required();
  train_cmd->add_option("--seed-list", seed_list, "Comma-separated agent seeds");
  train_cmd->add_option("--out", out, "Output directory");

  std::vector<double> etas;
  std::vector<std::size_t> kappas;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the eta x kappa ablation grid");
  sweep_cmd->add_option("--config", config_path, "Config file")->required();
  sweep_cmd->add_option("--eta", etas, "Eta values")->required()->delimiter(',');
  sweep_cmd->add_option("--kappa", kappas, "Kappa values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out, "Output directory");

  std::string run_dir;
  auto* analyze_cmd = app.add_subcommand("analyze", "Write analysis.csv for a finished run");
  analyze_cmd->add_option("--run", run_dir, "Run directory")->required();

  std::string env;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-instances", "Sample an instance set to CSV");
  gen_cmd->add_option("--env", env, "cartpole, pointmass or maze")->required();
  gen_cmd->add_option("--n", n, "Instance count")->required();
  gen_cmd->add_option("--seed", seed, "Sampling seed")->required();
  gen_cmd->add_option("--out", out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*train_cmd) return train(config_path, seed_list, out);
    if (*sweep_cmd) return sweep(config_path, etas, kappas, out);
    if (*analyze_cmd) return analyze(run_dir);
    if (*gen_cmd) return gen_instances(env, n, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
