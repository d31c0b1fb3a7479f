#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <jdg/estimators.hpp>

namespace jdg::runner {

// Exit codes for the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCellFailure = 3;

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<int> steps;
  std::optional<std::string> out;
  std::optional<int> workers;
};

struct ResultRow {
  std::string experiment;
  std::string estimator;
  std::string greek;
  double estimate = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  std::uint64_t paths = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<ResultRow> rows;
  std::vector<std::string> errors;
  std::string csv_path;
};

// Parses, validates (legality matrix, unknown keys) and executes one run
// configuration; writes the CSV next to returning the rows.
RunOutcome run_config_file(const std::filesystem::path& config,
                           const CliOverrides& overrides);
RunOutcome run_config_text(const std::string& json_text,
                           const CliOverrides& overrides);

struct PresetInfo {
  std::string name;
  std::string description;
  std::filesystem::path file;
};

// Enumerates presets/*.json; duplicate experiment names are a startup error.
std::vector<PresetInfo> list_presets(const std::filesystem::path& dir);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::string csv_header();

}  // namespace jdg::runner
