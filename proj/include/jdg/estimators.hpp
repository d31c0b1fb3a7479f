#pragma once

#include <cstdint>
#include <optional>

#include <jdg/payoffs.hpp>
#include <jdg/weights.hpp>

namespace jdg {

enum class Greek { delta, gamma };

const char* to_string(Greek g);

struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double variance = 0.0;
  std::uint64_t paths = 0;
  std::uint64_t rejected = 0;
  int steps = 0;
  double wall_seconds = 0.0;
  std::string tag;
  std::uint64_t seed = 0;
};

struct McConfig {
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  std::uint64_t block = 4096;
  std::uint64_t path_offset = 0;  // disjoint stream ranges across cells
};

// Rejected-path policy for the hypoelliptic weights: paths whose covariance
// is numerically degenerate are dropped and counted; the run fails if the
// rejected fraction exceeds this bound.
inline constexpr double kMaxRejectedFraction = 1e-4;

struct EstimatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// E[f(observations) * pi] with the family's spot weight; streaming
// constant-memory accumulation, deterministic for any worker count.
EstimatorResult weighted_greek(const ModelSpec& model, const Payoff& payoff,
                               WeightFamily family, Greek greek,
                               const TimeGrid& grid, const McConfig& mc,
                               const TemperingFunction* tempering = nullptr);

// Central finite differences on common random numbers; order 1 bumps the
// spot for delta, order 2 uses the symmetric second difference for gamma.
EstimatorResult fd_greek(const ModelSpec& model, const Payoff& payoff,
                         Greek greek, double bump_rel, const TimeGrid& grid,
                         const McConfig& mc, bool use_crn = true);

// E[f'(u) du/dS0] through the first variation; valid for (a.e.) C^1 payoffs.
EstimatorResult pathwise_greek(const ModelSpec& model, const Payoff& payoff,
                               const TimeGrid& grid, const McConfig& mc);

// Weighted estimator on the irregular part f_tilde plus pathwise estimator
// on the smooth part g, both on the same paths (delta only).
EstimatorResult localised_greek(const ModelSpec& model, const Payoff& payoff,
                                const LocalisationSplit& split,
                                WeightFamily family, const TimeGrid& grid,
                                const McConfig& mc);

// Weight-family legality for a payoff: raw indicator-class payoffs need
// either an SVJ-family weight (models that declare the class-J extension) or
// the localised estimator.
void check_legality(const ModelSpec& model, const Payoff& payoff,
                    WeightFamily family, bool localised);

struct ConvergenceCell {
  std::uint64_t paths = 0;
  int steps = 0;
  EstimatorResult result;
};

struct ConvergenceTable {
  std::vector<ConvergenceCell> cells;
};

// Runs the estimator callback over a doubling schedule with disjoint stream
// ranges per cell.
ConvergenceTable convergence_study(
    const std::vector<std::uint64_t>& path_schedule,
    const std::vector<int>& step_schedule,
    const std::function<EstimatorResult(std::uint64_t paths, int steps,
                                        std::uint64_t path_offset)>& run_cell);

}  // namespace jdg
