#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <jdg/rng.hpp>
#include <jdg/time_grid.hpp>

namespace jdg {

// Jump mark distributions used by the shipped models: normal marks (log-stock
// jumps), a point mass (unit Poisson increments), and a shifted lognormal
// y = e^xi - 1 with optional truncation band (multiplicative jumps on (-1,inf),
// conditioned to [lo, hi]).
struct MarkLaw {
  enum class Kind { normal, point_mass, shifted_lognormal };

  Kind kind = Kind::point_mass;
  double mu = 0.0;     // normal / lognormal location
  double sd = 0.0;     // normal / lognormal scale
  double value = 0.0;  // point mass
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static MarkLaw normal(double mu, double sd);
  static MarkLaw point_mass(double value);
  // y = exp(N(mu, sd^2)) - 1 conditioned to [lo, hi]; requires lo > -1.
  static MarkLaw shifted_lognormal(double mu, double sd, double lo, double hi);

  double mean() const;            // E[y] under the (possibly truncated) law
  double band_probability() const;  // mass of [lo, hi] under the base law
  double sample(double u) const;  // inverse CDF, u in (0,1)
};

struct JumpSourceSpec {
  double intensity = 0.0;  // per year, Poisson arrival rate
  MarkLaw marks;
};

struct JumpEvent {
  double time = 0.0;
  double mark = 0.0;
};

// All randomness consumed by one path: Brownian increments on the
// jump-adapted timeline plus the jump stream itself. Regenerating with the
// same (seed, path, grid) is bit-identical.
struct NoiseBundle {
  const TimeGrid* grid = nullptr;
  int dim = 0;  // driving Brownian dimension
  std::uint64_t seed = 0;
  std::uint64_t path = 0;

  std::vector<JumpEvent> jumps;       // sorted by time, all in (0, T]
  std::vector<double> times;          // grid nodes with jump times inserted
  std::vector<std::int32_t> jump_at;  // per node: jump index or -1
  std::vector<double> dw;             // intervals() x dim, row-major
  std::vector<int> base_node;         // refined index of each grid node

  int intervals() const { return int(times.size()) - 1; }
  double increment(int interval, int j) const { return dw[std::size_t(interval) * dim + j]; }
};

// Brownian increments over the grid intervals alone (no jump refinement):
// increment i,j ~ N(0, dt_i) independently, deterministic in the key.
std::vector<double> sample_brownian(const TimeGrid& grid, int dim,
                                    rng::StreamKey key);

// Compound Poisson stream on (0, horizon]: count ~ Poisson(intensity*horizon),
// times i.i.d. uniform, marks i.i.d. from the mark law, sorted by time.
std::vector<JumpEvent> sample_compound_poisson(double intensity,
                                               const MarkLaw& marks,
                                               double horizon,
                                               std::uint64_t seed,
                                               std::uint64_t path);

void build_noise(const TimeGrid& grid, int dim,
                 const std::optional<JumpSourceSpec>& jumps,
                 std::uint64_t seed, std::uint64_t path, NoiseBundle& out);

// Common-random-number pairing for bump-and-revalue: both finite-difference
// legs run on the identical bundle, only the initial condition differs.
inline const NoiseBundle& paired_noise_for_bump(const NoiseBundle& base) {
  return base;
}

// Sums fine increments over coarse intervals (coarse nodes must be a subset
// of the fine ones). Exact by construction; used by the scaling tests.
std::vector<double> merge_increments(const NoiseBundle& fine,
                                     const std::vector<double>& coarse_nodes);

}  // namespace jdg
