#include <jdg/runner.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace jdg::runner {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.contains(key))
    throw ConfigError("missing key '" + key + "' in " + context);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + context + " has the wrong type");
  }
}

template <typename T>
T optional_or(const json& obj, const std::string& key, const std::string& context,
              T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + context + " has the wrong type");
  }
}

struct ParsedConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  int workers = 2;
  std::string output = "results.csv";

  ModelSpec model;
  Payoff payoff;

  std::string kind;  // weighted | fd | pathwise | localised
  WeightFamily family = WeightFamily::bel_delta;
  Greek greek = Greek::delta;
  std::uint64_t paths = 0;
  int steps = 0;
  double bump = 0.01;
  bool crn = true;
  double bandwidth = 0.0;  // 0 => 0.1 * payoff scale
  double window = 1.0;
  std::vector<std::uint64_t> path_schedule;
  std::vector<int> step_schedule;
};

WeightFamily parse_family(const std::string& name) {
  if (name == "bel_delta") return WeightFamily::bel_delta;
  if (name == "bel_gamma") return WeightFamily::bel_gamma;
  if (name == "hypoelliptic") return WeightFamily::hypoelliptic;
  if (name == "svj_delta") return WeightFamily::svj_delta;
  if (name == "svj_gamma") return WeightFamily::svj_gamma;
  if (name == "svjj_delta") return WeightFamily::svjj_delta;
  throw ConfigError("unknown weight family '" + name + "'");
}

ModelSpec parse_model(const json& m) {
  const std::string name = require<std::string>(m, "name", "model block");
  if (name == "gbm" || name == "gbm_log") {
    reject_unknown_keys(m, {"name", "spot", "rate", "sigma"}, "model block");
    const double spot = require<double>(m, "spot", "model block");
    const double rate = optional_or<double>(m, "rate", "model block", 0.0);
    const double sigma = require<double>(m, "sigma", "model block");
    return name == "gbm" ? make_gbm(spot, rate, sigma) : make_gbm_log(spot, rate, sigma);
  }
  if (name == "merton") {
    reject_unknown_keys(m, {"name", "spot", "rate", "sigma", "intensity",
                            "jump_mean", "jump_sd"},
                        "model block");
    return make_merton(require<double>(m, "spot", "model block"),
                       optional_or<double>(m, "rate", "model block", 0.0),
                       require<double>(m, "sigma", "model block"),
                       require<double>(m, "intensity", "model block"),
                       require<double>(m, "jump_mean", "model block"),
                       require<double>(m, "jump_sd", "model block"));
  }
  if (name == "bachelier_asian") {
    reject_unknown_keys(m, {"name", "spot", "sigma", "jump_rate"}, "model block");
    return make_bachelier_jump_asian(require<double>(m, "spot", "model block"),
                                     require<double>(m, "sigma", "model block"),
                                     optional_or<double>(m, "jump_rate", "model block", 0.0));
  }
  if (name == "explevy_asian") {
    reject_unknown_keys(m, {"name", "spot", "beta", "sigma", "intensity",
                            "log_jump_mean", "log_jump_sd", "delta_trunc"},
                        "model block");
    return make_exp_levy_asian(require<double>(m, "spot", "model block"),
                               optional_or<double>(m, "beta", "model block", 0.0),
                               require<double>(m, "sigma", "model block"),
                               require<double>(m, "intensity", "model block"),
                               require<double>(m, "log_jump_mean", "model block"),
                               require<double>(m, "log_jump_sd", "model block"),
                               optional_or<double>(m, "delta_trunc", "model block", 1e-3));
  }
  if (name == "svj" || name == "svjj") {
    reject_unknown_keys(m, {"name", "spot", "r", "rho", "kappa", "theta", "eta",
                            "sigma0_sq", "lambda", "jump_mean", "jump_sd",
                            "gamma_v", "trunc_n", "trunc_floor"},
                        "model block");
    SvjParams p;
    p.spot = require<double>(m, "spot", "model block");
    p.r = optional_or<double>(m, "r", "model block", 0.0);
    p.rho = require<double>(m, "rho", "model block");
    p.kappa = require<double>(m, "kappa", "model block");
    p.theta = require<double>(m, "theta", "model block");
    p.eta = require<double>(m, "eta", "model block");
    p.sigma0_sq = require<double>(m, "sigma0_sq", "model block");
    p.lambda = require<double>(m, "lambda", "model block");
    p.jump_mean = optional_or<double>(m, "jump_mean", "model block", 0.0);
    p.jump_sd = optional_or<double>(m, "jump_sd", "model block", 0.0);
    TruncationLevel trunc;
    trunc.n = optional_or<int>(m, "trunc_n", "model block", 1000);
    trunc.floor_override = optional_or<double>(m, "trunc_floor", "model block", 1e-4);
    if (name == "svjj") {
      p.gamma_v = require<double>(m, "gamma_v", "model block");
      return make_svjj(p, trunc);
    }
    return make_svj(p, trunc);
  }
  throw ConfigError("unknown model '" + name + "'");
}

Payoff parse_payoff(const json& pj) {
  const std::string name = require<std::string>(pj, "name", "payoff block");
  if (name == "european_call") {
    reject_unknown_keys(pj, {"name", "strike", "expiry"}, "payoff block");
    return european_call(require<double>(pj, "strike", "payoff block"),
                         require<double>(pj, "expiry", "payoff block"));
  }
  if (name == "double_digital") {
    reject_unknown_keys(pj, {"name", "k1", "k2", "expiry"}, "payoff block");
    return double_digital(require<double>(pj, "k1", "payoff block"),
                          require<double>(pj, "k2", "payoff block"),
                          require<double>(pj, "expiry", "payoff block"));
  }
  if (name == "digital_cliquet") {
    reject_unknown_keys(pj, {"name", "k1", "k2", "t1", "expiry"}, "payoff block");
    return digital_cliquet(require<double>(pj, "k1", "payoff block"),
                           require<double>(pj, "k2", "payoff block"),
                           require<double>(pj, "t1", "payoff block"),
                           require<double>(pj, "expiry", "payoff block"));
  }
  if (name == "asian_fixed_strike") {
    reject_unknown_keys(pj, {"name", "strike", "expiry"}, "payoff block");
    return asian_fixed_strike(require<double>(pj, "strike", "payoff block"),
                              require<double>(pj, "expiry", "payoff block"));
  }
  throw ConfigError("unknown payoff '" + name + "'");
}

ParsedConfig parse_config(const std::string& text, const CliOverrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(root,
                      {"experiment", "description", "seed", "workers", "output",
                       "model", "payoff", "estimator"},
                      "run configuration");

  ParsedConfig cfg;
  cfg.experiment = require<std::string>(root, "experiment", "run configuration");
  cfg.seed = require<std::uint64_t>(root, "seed", "run configuration");
  cfg.workers = optional_or<int>(root, "workers", "run configuration", 2);
  cfg.output = optional_or<std::string>(root, "output", "run configuration",
                                        "results.csv");
  cfg.model = parse_model(require<json>(root, "model", "run configuration"));
  cfg.payoff = parse_payoff(require<json>(root, "payoff", "run configuration"));

  const json ej = require<json>(root, "estimator", "run configuration");
  reject_unknown_keys(ej,
                      {"kind", "family", "greek", "paths", "steps", "bump", "crn",
                       "bandwidth", "window", "path_schedule", "step_schedule"},
                      "estimator block");
  cfg.kind = require<std::string>(ej, "kind", "estimator block");
  if (cfg.kind != "weighted" && cfg.kind != "fd" && cfg.kind != "pathwise" &&
      cfg.kind != "localised")
    throw ConfigError("unknown estimator kind '" + cfg.kind + "'");
  const std::string greek = optional_or<std::string>(ej, "greek", "estimator block",
                                                     "delta");
  if (greek == "delta")
    cfg.greek = Greek::delta;
  else if (greek == "gamma")
    cfg.greek = Greek::gamma;
  else
    throw ConfigError("unknown greek '" + greek + "'");
  if (cfg.kind == "weighted" || cfg.kind == "localised")
    cfg.family = parse_family(require<std::string>(ej, "family", "estimator block"));
  cfg.paths = require<std::uint64_t>(ej, "paths", "estimator block");
  cfg.steps = require<int>(ej, "steps", "estimator block");
  cfg.bump = optional_or<double>(ej, "bump", "estimator block", 0.01);
  cfg.crn = optional_or<bool>(ej, "crn", "estimator block", true);
  cfg.bandwidth = optional_or<double>(ej, "bandwidth", "estimator block", 0.0);
  cfg.window = optional_or<double>(ej, "window", "estimator block", 1.0);
  cfg.path_schedule = optional_or<std::vector<std::uint64_t>>(
      ej, "path_schedule", "estimator block", {});
  cfg.step_schedule =
      optional_or<std::vector<int>>(ej, "step_schedule", "estimator block", {});

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.paths) cfg.paths = *overrides.paths;
  if (overrides.steps) cfg.steps = *overrides.steps;
  if (overrides.out) cfg.output = *overrides.out;
  if (overrides.workers) cfg.workers = *overrides.workers;

  if (cfg.paths == 0) throw ConfigError("estimator paths must be positive");
  if (cfg.steps <= 0) throw ConfigError("estimator steps must be positive");
  if (cfg.workers <= 0) throw ConfigError("workers must be positive");
  return cfg;
}

TimeGrid build_grid(const ParsedConfig& cfg, int steps) {
  std::vector<double> mandatory = cfg.payoff.obs_dates;
  if (cfg.greek == Greek::gamma && cfg.kind == "weighted")
    mandatory.push_back(0.5 * cfg.payoff.first_date());
  std::sort(mandatory.begin(), mandatory.end());
  mandatory.erase(std::unique(mandatory.begin(), mandatory.end()), mandatory.end());
  return TimeGrid::uniform(cfg.payoff.obs_dates.back(), steps, mandatory);
}

EstimatorResult run_one_cell(const ParsedConfig& cfg, std::uint64_t paths, int steps,
                             std::uint64_t offset) {
  const TimeGrid grid = build_grid(cfg, steps);
  McConfig mc;
  mc.paths = paths;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  mc.path_offset = offset;

  if (cfg.kind == "weighted")
    return weighted_greek(cfg.model, cfg.payoff, cfg.family, cfg.greek, grid, mc);
  if (cfg.kind == "fd")
    return fd_greek(cfg.model, cfg.payoff, cfg.greek, cfg.bump, grid, mc, cfg.crn);
  if (cfg.kind == "pathwise") {
    if (cfg.greek != Greek::delta)
      throw ConfigError("pathwise estimator only computes delta");
    return pathwise_greek(cfg.model, cfg.payoff, grid, mc);
  }
  const double bandwidth =
      cfg.bandwidth > 0.0 ? cfg.bandwidth : 0.1 * cfg.payoff.scale_hint;
  const LocalisationSplit split = localise(cfg.payoff, bandwidth, cfg.window);
  if (cfg.greek != Greek::delta)
    throw ConfigError("localised estimator only computes delta");
  return localised_greek(cfg.model, cfg.payoff, split, cfg.family, grid, mc);
}

void validate_before_run(const ParsedConfig& cfg) {
  // Legality and grid construction run before any simulation starts.
  build_grid(cfg, cfg.steps);
  if (cfg.kind == "weighted") check_legality(cfg.model, cfg.payoff, cfg.family, false);
  if (cfg.kind == "localised") check_legality(cfg.model, cfg.payoff, cfg.family, true);
  if (cfg.kind == "pathwise" && cfg.payoff.regularity == Regularity::class_j)
    throw ConfigError("pathwise estimator is not defined for indicator payoffs");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "experiment,estimator,greek,estimate,std_error,variance,paths,steps,seed,wall_ms";
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << csv_header() << "\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.estimator << ',' << r.greek << ','
       << format_double(r.estimate) << ',' << format_double(r.std_error) << ','
       << format_double(r.variance) << ',' << r.paths << ',' << r.steps << ','
       << r.seed << ',' << format_double(r.wall_ms) << "\n";
  }
}

RunOutcome run_config_text(const std::string& json_text, const CliOverrides& overrides) {
  RunOutcome outcome;
  ParsedConfig cfg = parse_config(json_text, overrides);
  validate_before_run(cfg);

  std::vector<std::uint64_t> paths_sched =
      cfg.path_schedule.empty() ? std::vector<std::uint64_t>{cfg.paths}
                                : cfg.path_schedule;
  std::vector<int> steps_sched =
      cfg.step_schedule.empty() ? std::vector<int>{cfg.steps} : cfg.step_schedule;

  std::uint64_t offset = 0;
  for (int steps : steps_sched) {
    for (std::uint64_t paths : paths_sched) {
      try {
        const EstimatorResult res = run_one_cell(cfg, paths, steps, offset);
        ResultRow row;
        row.experiment = cfg.experiment;
        row.estimator = res.tag;
        row.greek = to_string(cfg.greek);
        row.estimate = res.estimate;
        row.std_error = res.std_error;
        row.variance = res.variance;
        row.paths = res.paths;
        row.steps = res.steps;
        row.seed = res.seed;
        row.wall_ms = res.wall_seconds * 1e3;
        outcome.rows.push_back(std::move(row));
      } catch (const ConfigError&) {
        throw;  // configuration problems abort the whole run
      } catch (const std::exception& e) {
        outcome.errors.push_back("cell paths=" + std::to_string(paths) +
                                 " steps=" + std::to_string(steps) + ": " + e.what());
        outcome.exit_code = kExitCellFailure;
      }
      offset += paths;
    }
  }

  std::ofstream os(cfg.output);
  if (!os) throw ConfigError("cannot open output file '" + cfg.output + "'");
  write_csv(os, outcome.rows);
  outcome.csv_path = cfg.output;
  return outcome;
}

RunOutcome run_config_file(const std::filesystem::path& config,
                           const CliOverrides& overrides) {
  std::ifstream is(config);
  if (!is) throw ConfigError("cannot read config file '" + config.string() + "'");
  std::stringstream buffer;
  buffer << is.rdbuf();
  return run_config_text(buffer.str(), overrides);
}

std::vector<PresetInfo> list_presets(const std::filesystem::path& dir) {
  std::vector<PresetInfo> presets;
  if (!std::filesystem::exists(dir)) return presets;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    std::ifstream is(entry.path());
    json root;
    try {
      is >> root;
    } catch (const json::exception& e) {
      throw ConfigError("preset " + entry.path().string() + " is not valid JSON: " +
                        e.what());
    }
    PresetInfo info;
    info.name = require<std::string>(root, "experiment",
                                     "preset " + entry.path().string());
    info.description = optional_or<std::string>(
        root, "description", "preset " + entry.path().string(), "");
    info.file = entry.path();
    presets.push_back(std::move(info));
  }
  std::sort(presets.begin(), presets.end(),
            [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < presets.size(); ++i)
    if (presets[i].name == presets[i - 1].name)
      throw ConfigError("duplicate preset name '" + presets[i].name + "' (" +
                        presets[i - 1].file.string() + ", " +
                        presets[i].file.string() + ")");
  return presets;
}

}  // namespace jdg::runner
