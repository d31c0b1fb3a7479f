#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include <jdg/runner.hpp>

namespace {

namespace fs = std::filesystem;

fs::path resolve_preset(const fs::path& dir, const std::string& name) {
  const auto presets = jdg::runner::list_presets(dir);
  for (const auto& p : presets)
    if (p.name == name) return p.file;
  throw jdg::ConfigError("preset '" + name + "' not found in " + dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo Greeks for jump-diffusions via Malliavin/BEL weights"};

  std::string config_path;
  std::string preset_name;
  std::string presets_dir = "presets";
  bool do_list = false;
  jdg::runner::CliOverrides overrides;

  std::uint64_t seed = 0, paths = 0;
  int steps = 0, workers = 0;
  std::string out;

  app.add_option("--config", config_path, "run configuration file (JSON)");
  app.add_option("--preset", preset_name, "named preset from the presets directory");
  app.add_option("--presets-dir", presets_dir, "presets directory")
      ->capture_default_str();
  app.add_flag("--list-presets", do_list, "list available presets and exit");
  auto* seed_opt = app.add_option("--seed", seed, "override the configured seed");
  auto* paths_opt = app.add_option("--paths", paths, "override the path count");
  auto* steps_opt = app.add_option("--steps", steps, "override the step count");
  auto* out_opt = app.add_option("--out", out, "override the CSV output path");
  auto* workers_opt = app.add_option("--workers", workers, "override the worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : jdg::runner::kExitConfigError;
  }

  try {
    if (do_list) {
      for (const auto& p : jdg::runner::list_presets(presets_dir))
        std::printf("%-28s %s\n", p.name.c_str(), p.description.c_str());
      return jdg::runner::kExitOk;
    }
    if (config_path.empty() && preset_name.empty())
      throw jdg::ConfigError("either --config or --preset is required");
    if (!config_path.empty() && !preset_name.empty())
      throw jdg::ConfigError("--config and --preset are mutually exclusive");

    if (seed_opt->count()) overrides.seed = seed;
    if (paths_opt->count()) overrides.paths = paths;
    if (steps_opt->count()) overrides.steps = steps;
    if (out_opt->count()) overrides.out = out;
    if (workers_opt->count()) overrides.workers = workers;

    const fs::path config = config_path.empty()
                                ? resolve_preset(presets_dir, preset_name)
                                : fs::path(config_path);
    const auto outcome = jdg::runner::run_config_file(config, overrides);
    for (const auto& err : outcome.errors) std::cerr << "cell failure: " << err << "\n";
    std::cout << "wrote " << outcome.rows.size() << " rows to " << outcome.csv_path
              << "\n";
    return outcome.exit_code;
  } catch (const jdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return jdg::runner::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jdg::runner::kExitCellFailure;
  }
}
