#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "trustgame/commands.hpp"

int main(int argc, char** argv)
{
  CLI::App app{"N-player evolutionary trust game simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (created if absent)")->required();
    sub->add_option("--set", overrides, "Override a config key: key=value (repeatable)");
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run a seeded ensemble and write per-run CSVs");
  run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  add_common(run);

  auto* sweep = app.add_subcommand("sweep", "Initial-condition x rule x topology x r_UT sweep");
  sweep->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  add_common(sweep);

  std::vector<std::string> inputs;
  std::string which = "all";
  auto* analyze = app.add_subcommand("analyze", "Analyze run directories written by `run`");
  analyze->add_option("--in", inputs, "Run directory (repeatable)")->required();
  analyze->add_option("--which", which, "fractal | gl | spectrum | lagcorr | all (comma separated)");
  add_common(analyze);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) {
      std::vector<std::filesystem::path> dirs(inputs.begin(), inputs.end());
      trustgame::cmd_analyze(dirs, out_dir, trustgame::parse_analysis_kinds(which), overrides);
      return 0;
    }
    std::vector<std::string> all = overrides;
    if (app.got_subcommand(run) ? run->count("--seed") : sweep->count("--seed")) {
      all.push_back("seed=" + std::to_string(seed));
    }
    const auto config = trustgame::parse_config(std::filesystem::path(config_path), all);
    if (app.got_subcommand(run)) {
      trustgame::cmd_run(config, out_dir, threads);
    } else {
      trustgame::cmd_sweep(config, out_dir, threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
