#include <jdg/estimators.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace jdg {

const char* to_string(Greek g) { return g == Greek::delta ? "delta" : "gamma"; }

namespace {

constexpr std::uint64_t kIndependentLegOffset = 1ull << 40;

struct BlockStats {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t n = 0;
  std::uint64_t rejected = 0;
};

// Deterministic parallel reduction: path blocks have fixed contents and the
// final merge runs in block order, so the result is identical for any worker
// count.
template <typename WorkerFactory>
BlockStats run_paths(const McConfig& mc, WorkerFactory&& make_worker) {
  const std::uint64_t block = std::max<std::uint64_t>(1, mc.block);
  const std::uint64_t n_blocks = (mc.paths + block - 1) / block;
  std::vector<BlockStats> blocks(n_blocks);
  std::atomic<std::uint64_t> next{0};

  auto work = [&]() {
    auto per_path = make_worker();
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) break;
      BlockStats bs;
      const std::uint64_t lo = b * block;
      const std::uint64_t hi = std::min(mc.paths, lo + block);
      for (std::uint64_t i = lo; i < hi; ++i) {
        const std::optional<double> v = per_path(mc.path_offset + i);
        if (!v) {
          ++bs.rejected;
          continue;
        }
        bs.sum += *v;
        bs.sumsq += *v * *v;
        ++bs.n;
      }
      blocks[b] = bs;
    }
  };

  const int n_workers = std::max(1, mc.workers);
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  BlockStats total;
  for (const auto& b : blocks) {
    total.sum += b.sum;
    total.sumsq += b.sumsq;
    total.n += b.n;
    total.rejected += b.rejected;
  }
  return total;
}

EstimatorResult finish(const BlockStats& s, const McConfig& mc, int steps,
                       std::string tag, double wall_seconds) {
  if (s.n == 0) throw EstimatorError("estimator received no accepted paths");
  if (double(s.rejected) > kMaxRejectedFraction * double(mc.paths))
    throw EstimatorError("rejected path fraction " +
                         std::to_string(double(s.rejected) / double(mc.paths)) +
                         " exceeds tolerance");
  EstimatorResult r;
  r.estimate = s.sum / double(s.n);
  r.variance = s.n > 1 ? std::max(0.0, (s.sumsq - double(s.n) * r.estimate * r.estimate) /
                                           double(s.n - 1))
                       : 0.0;
  r.std_error = std::sqrt(r.variance / double(s.n));
  r.paths = s.n;
  r.rejected = s.rejected;
  r.steps = steps;
  r.tag = std::move(tag);
  r.seed = mc.seed;
  r.wall_seconds = wall_seconds;
  return r;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Slot of each payoff observation date inside grid.mandatory.
std::vector<int> observation_slots(const Payoff& payoff, const TimeGrid& grid) {
  std::vector<int> slots;
  slots.reserve(payoff.obs_dates.size());
  for (double t : payoff.obs_dates) {
    const auto it = std::find(grid.mandatory.begin(), grid.mandatory.end(), t);
    if (it == grid.mandatory.end())
      throw ConfigError("payoff observation date " + std::to_string(t) +
                        " is not a mandatory grid node");
    slots.push_back(int(it - grid.mandatory.begin()));
  }
  return slots;
}

void gather_observations(const SimulatedPath& path, const ModelSpec& model,
                         const Payoff& payoff, const std::vector<int>& slots,
                         std::vector<double>& out) {
  out.resize(payoff.inputs.size());
  for (std::size_t i = 0; i < payoff.inputs.size(); ++i) {
    const auto& in = payoff.inputs[i];
    const int node = path.obs_node[std::size_t(slots[std::size_t(in.date)])];
    out[i] = model.observe(path.x[std::size_t(node)])(in.component);
  }
}

// d(observation)/dS0 for each payoff input via the first variation.
double pathwise_inner_derivative(const SimulatedPath& path, const ModelSpec& model,
                                 const Payoff& payoff, const std::vector<int>& slots,
                                 const Vec& direction) {
  double acc = 0.0;
  for (std::size_t i = 0; i < payoff.inputs.size(); ++i) {
    const auto& in = payoff.inputs[i];
    const int node = path.obs_node[std::size_t(slots[std::size_t(in.date)])];
    const Vec d_obs =
        model.observe_jacobian(path.x[std::size_t(node)]) *
        (path.u[std::size_t(node)] * direction);
    acc += payoff.coeffs[i] * d_obs(in.component);
  }
  return acc;
}

bool is_delta_family(WeightFamily f) {
  return f == WeightFamily::bel_delta || f == WeightFamily::svj_delta ||
         f == WeightFamily::svjj_delta || f == WeightFamily::hypoelliptic;
}

}  // namespace

void check_legality(const ModelSpec& model, const Payoff& payoff,
                    WeightFamily family, bool localised) {
  if (!model.has_family(family))
    throw ConfigError("model '" + model.name + "' does not declare weight family '" +
                      std::string(to_string(family)) + "'");
  for (const auto& in : payoff.inputs) {
    if (in.date < 0 || in.date >= int(payoff.obs_dates.size()))
      throw ConfigError("payoff input references an undeclared observation date");
    if (in.component < 0 || in.component >= model.observed_dim)
      throw ConfigError("payoff '" + payoff.name + "' reads observable component " +
                        std::to_string(in.component) + " but model '" + model.name +
                        "' only quotes " + std::to_string(model.observed_dim));
  }
  const bool indicator = payoff.regularity == Regularity::class_j;
  const bool smoothness_family =
      family == WeightFamily::bel_delta || family == WeightFamily::bel_gamma ||
      family == WeightFamily::hypoelliptic;
  if (indicator && !localised && smoothness_family && !model.class_j_weights_ok)
    throw ConfigError(
        "payoff '" + payoff.name + "' is a raw indicator: weight family '" +
        std::string(to_string(family)) + "' on model '" + model.name +
        "' requires a C^1 payoff (smoothness hypothesis of the elliptic weight "
        "representation); localise the payoff or use an SVJ-family weight");
}

EstimatorResult weighted_greek(const ModelSpec& model, const Payoff& payoff,
                               WeightFamily family, Greek greek,
                               const TimeGrid& grid, const McConfig& mc,
                               const TemperingFunction* tempering) {
  check_legality(model, payoff, family, false);
  if (greek == Greek::delta && !is_delta_family(family))
    throw ConfigError("weight family '" + std::string(to_string(family)) +
                      "' does not estimate delta");
  if (greek == Greek::gamma && family != WeightFamily::bel_gamma &&
      family != WeightFamily::svj_gamma)
    throw ConfigError("weight family '" + std::string(to_string(family)) +
                      "' does not estimate gamma");

  const std::vector<int> slots = observation_slots(payoff, grid);
  const double t1 = payoff.first_date();
  const TemperingFunction a =
      tempering ? *tempering : TemperingFunction::uniform(grid, t1);
  const int order = greek == Greek::gamma ? 2 : 1;

  Stopwatch timer;
  const BlockStats stats = run_paths(mc, [&]() {
    return [&, noise = NoiseBundle{}, path = SimulatedPath{},
            obs = std::vector<double>{}](std::uint64_t idx) mutable
           -> std::optional<double> {
      build_noise(grid, model.brownian_dim, model.jumps, mc.seed, idx, noise);
      simulate_path(model, grid, noise, order, path);
      double w = 0.0;
      try {
        w = greek == Greek::delta
                ? spot_delta_weight(path, model, family, a)
                : spot_gamma_weight(path, model, family, t1, a);
      } catch (const DegenerateCovariance&) {
        return std::nullopt;
      }
      gather_observations(path, model, payoff, slots, obs);
      return payoff.f(payoff.reduce(obs)) * w;
    };
  });
  return finish(stats, mc, grid.n_steps,
                std::string("weighted:") + to_string(family), timer.seconds());
}

EstimatorResult fd_greek(const ModelSpec& model, const Payoff& payoff, Greek greek,
                         double bump_rel, const TimeGrid& grid, const McConfig& mc,
                         bool use_crn) {
  if (!(bump_rel > 0.0)) throw ConfigError("finite-difference bump must be positive");
  const std::vector<int> slots = observation_slots(payoff, grid);
  const double h = bump_rel * model.spot0;

  ModelSpec up = model;
  up.z0 = model.initial_state_for_spot(model.spot0 + h);
  ModelSpec down = model;
  down.z0 = model.initial_state_for_spot(model.spot0 - h);

  Stopwatch timer;
  const BlockStats stats = run_paths(mc, [&]() {
    return [&, noise = NoiseBundle{}, noise2 = NoiseBundle{},
            path = SimulatedPath{}, obs = std::vector<double>{}](
               std::uint64_t idx) mutable -> std::optional<double> {
      build_noise(grid, model.brownian_dim, model.jumps, mc.seed, idx, noise);
      const NoiseBundle& shared = paired_noise_for_bump(noise);

      simulate_path(up, grid, shared, 0, path);
      gather_observations(path, up, payoff, slots, obs);
      const double f_up = payoff.f(payoff.reduce(obs));

      const NoiseBundle* minus_noise = &shared;
      if (!use_crn) {
        build_noise(grid, model.brownian_dim, model.jumps, mc.seed,
                    idx + kIndependentLegOffset, noise2);
        minus_noise = &noise2;
      }
      simulate_path(down, grid, *minus_noise, 0, path);
      gather_observations(path, down, payoff, slots, obs);
      const double f_down = payoff.f(payoff.reduce(obs));

      if (greek == Greek::delta) return (f_up - f_down) / (2.0 * h);

      simulate_path(model, grid, shared, 0, path);
      gather_observations(path, model, payoff, slots, obs);
      const double f_mid = payoff.f(payoff.reduce(obs));
      return (f_up - 2.0 * f_mid + f_down) / (h * h);
    };
  });
  return finish(stats, mc, grid.n_steps, use_crn ? "fd:crn" : "fd:independent",
                timer.seconds());
}

EstimatorResult pathwise_greek(const ModelSpec& model, const Payoff& payoff,
                               const TimeGrid& grid, const McConfig& mc) {
  if (payoff.regularity == Regularity::class_j)
    throw ConfigError("pathwise differentiation is not defined for indicator payoffs");
  if (!payoff.f_prime) throw ConfigError("pathwise estimator needs the payoff derivative");
  const std::vector<int> slots = observation_slots(payoff, grid);
  const Vec direction = model.spot_direction();

  Stopwatch timer;
  const BlockStats stats = run_paths(mc, [&]() {
    return [&, noise = NoiseBundle{}, path = SimulatedPath{},
            obs = std::vector<double>{}](std::uint64_t idx) mutable
           -> std::optional<double> {
      build_noise(grid, model.brownian_dim, model.jumps, mc.seed, idx, noise);
      simulate_path(model, grid, noise, 1, path);
      gather_observations(path, model, payoff, slots, obs);
      const double inner =
          pathwise_inner_derivative(path, model, payoff, slots, direction);
      return payoff.f_prime(payoff.reduce(obs)) * inner;
    };
  });
  return finish(stats, mc, grid.n_steps, "pathwise", timer.seconds());
}

EstimatorResult localised_greek(const ModelSpec& model, const Payoff& payoff,
                                const LocalisationSplit& split, WeightFamily family,
                                const TimeGrid& grid, const McConfig& mc) {
  check_legality(model, payoff, family, true);
  if (!is_delta_family(family))
    throw ConfigError("localised estimation is wired for delta families only");
  const std::vector<int> slots = observation_slots(payoff, grid);
  const double t1 = payoff.first_date();
  const TemperingFunction a = TemperingFunction::uniform(grid, t1);
  const Vec direction = model.spot_direction();

  Stopwatch timer;
  const BlockStats stats = run_paths(mc, [&]() {
    return [&, noise = NoiseBundle{}, path = SimulatedPath{},
            obs = std::vector<double>{}](std::uint64_t idx) mutable
           -> std::optional<double> {
      build_noise(grid, model.brownian_dim, model.jumps, mc.seed, idx, noise);
      simulate_path(model, grid, noise, 1, path);
      double w = 0.0;
      try {
        w = spot_delta_weight(path, model, family, a);
      } catch (const DegenerateCovariance&) {
        return std::nullopt;
      }
      gather_observations(path, model, payoff, slots, obs);
      const double u = payoff.reduce(obs);
      const double inner =
          pathwise_inner_derivative(path, model, payoff, slots, direction);
      // Same paths carry both legs, so the sample variance of the sum keeps
      // the cross-covariance.
      return split.f_tilde(u) * w + split.g_prime(u) * inner;
    };
  });
  return finish(stats, mc, grid.n_steps,
                std::string("localised:") + to_string(family), timer.seconds());
}

ConvergenceTable convergence_study(
    const std::vector<std::uint64_t>& path_schedule,
    const std::vector<int>& step_schedule,
    const std::function<EstimatorResult(std::uint64_t, int, std::uint64_t)>& run_cell) {
  if (path_schedule.empty() || step_schedule.empty())
    throw ConfigError("convergence schedule must be non-empty");
  ConvergenceTable table;
  std::uint64_t offset = 0;
  for (int steps : step_schedule) {
    for (std::uint64_t paths : path_schedule) {
      ConvergenceCell cell;
      cell.paths = paths;
      cell.steps = steps;
      cell.result = run_cell(paths, steps, offset);
      offset += paths;  // disjoint stream ranges per cell
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

}  // namespace jdg
