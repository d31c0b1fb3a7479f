#include <jdg/noise.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jdg {

namespace rng {

// Acklam's rational approximation with one Halley refinement against erfc;
// accurate to about 1 ulp over (0,1).
double inverse_normal_cdf(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace rng

MarkLaw MarkLaw::normal(double mu, double sd) {
  MarkLaw law;
  law.kind = Kind::normal;
  law.mu = mu;
  law.sd = sd;
  return law;
}

MarkLaw MarkLaw::point_mass(double value) {
  MarkLaw law;
  law.kind = Kind::point_mass;
  law.value = value;
  return law;
}

MarkLaw MarkLaw::shifted_lognormal(double mu, double sd, double lo, double hi) {
  if (!(lo > -1.0)) throw std::invalid_argument("multiplicative marks need lo > -1");
  if (!(hi > lo)) throw std::invalid_argument("empty mark truncation band");
  MarkLaw law;
  law.kind = Kind::shifted_lognormal;
  law.mu = mu;
  law.sd = sd;
  law.lo = lo;
  law.hi = hi;
  return law;
}

double MarkLaw::band_probability() const {
  if (kind != Kind::shifted_lognormal) return 1.0;
  const double a = (std::log1p(lo) - mu) / sd;
  const double b = (std::log1p(hi) - mu) / sd;
  return rng::normal_cdf(b) - rng::normal_cdf(a);
}

double MarkLaw::mean() const {
  switch (kind) {
    case Kind::normal:
      return mu;
    case Kind::point_mass:
      return value;
    case Kind::shifted_lognormal: {
      // E[e^xi - 1 | a <= xi <= b], xi ~ N(mu, sd^2)
      const double a = (std::log1p(lo) - mu) / sd;
      const double b = (std::log1p(hi) - mu) / sd;
      const double z = rng::normal_cdf(b) - rng::normal_cdf(a);
      const double m = std::exp(mu + 0.5 * sd * sd) *
                       (rng::normal_cdf(b - sd) - rng::normal_cdf(a - sd)) / z;
      return m - 1.0;
    }
  }
  return 0.0;
}

double MarkLaw::sample(double u) const {
  switch (kind) {
    case Kind::normal:
      return mu + sd * rng::inverse_normal_cdf(u);
    case Kind::point_mass:
      return value;
    case Kind::shifted_lognormal: {
      const double a = rng::normal_cdf((std::log1p(lo) - mu) / sd);
      const double b = rng::normal_cdf((std::log1p(hi) - mu) / sd);
      const double xi = mu + sd * rng::inverse_normal_cdf(a + u * (b - a));
      return std::expm1(xi);
    }
  }
  return 0.0;
}

std::vector<double> sample_brownian(const TimeGrid& grid, int dim,
                                    rng::StreamKey key) {
  if (dim < 1) throw std::invalid_argument("brownian dimension must be >= 1");
  const int n = int(grid.nodes.size()) - 1;
  std::vector<double> out(std::size_t(std::max(n, 0)) * dim);
  const rng::Stream stream(key);
  for (int i = 0; i < n; ++i) {
    const double sqrt_dt = std::sqrt(grid.nodes[i + 1] - grid.nodes[i]);
    for (int j = 0; j < dim; ++j)
      out[std::size_t(i) * dim + j] =
          sqrt_dt * stream.normal(std::uint64_t(i) * dim + j);
  }
  return out;
}

namespace {

// Poisson count by inversion of a single uniform.
int poisson_inverse(double mean, double u) {
  double pmf = std::exp(-mean);
  double cum = pmf;
  int k = 0;
  while (u > cum && k < 10000) {
    ++k;
    pmf *= mean / double(k);
    cum += pmf;
  }
  return k;
}

}  // namespace

std::vector<JumpEvent> sample_compound_poisson(double intensity,
                                               const MarkLaw& marks,
                                               double horizon,
                                               std::uint64_t seed,
                                               std::uint64_t path) {
  if (intensity < 0.0) throw std::invalid_argument("jump intensity must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("jump horizon must be positive");

  std::vector<JumpEvent> events;
  if (intensity == 0.0) return events;

  const rng::Stream time_stream({seed, path, rng::Purpose::jumps});
  const rng::Stream mark_stream({seed, path, rng::Purpose::marks});

  const int count = poisson_inverse(intensity * horizon, time_stream.uniform(0));
  events.resize(std::size_t(count));
  for (int i = 0; i < count; ++i) {
    events[std::size_t(i)].time = horizon * time_stream.uniform(std::uint64_t(i) + 1);
    events[std::size_t(i)].mark = marks.sample(mark_stream.uniform(std::uint64_t(i)));
  }
  std::sort(events.begin(), events.end(),
            [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
  return events;
}

void build_noise(const TimeGrid& grid, int dim,
                 const std::optional<JumpSourceSpec>& jumps,
                 std::uint64_t seed, std::uint64_t path, NoiseBundle& out) {
  out.grid = &grid;
  out.dim = dim;
  out.seed = seed;
  out.path = path;

  out.jumps.clear();
  if (jumps && jumps->intensity > 0.0)
    out.jumps = sample_compound_poisson(jumps->intensity, jumps->marks,
                                        grid.horizon, seed, path);

  // Merge jump times into the grid. Jumps landing exactly on a node (measure
  // zero) are shifted onto the node.
  const std::size_t n_base = grid.nodes.size();
  out.times.clear();
  out.times.reserve(n_base + out.jumps.size());
  out.jump_at.clear();
  out.base_node.clear();
  out.base_node.reserve(n_base);

  std::size_t ji = 0;
  for (std::size_t b = 0; b < n_base; ++b) {
    const double t = grid.nodes[b];
    while (ji < out.jumps.size() && out.jumps[ji].time < t) {
      out.times.push_back(out.jumps[ji].time);
      out.jump_at.push_back(std::int32_t(ji));
      ++ji;
    }
    out.times.push_back(t);
    std::int32_t tag = -1;
    while (ji < out.jumps.size() && out.jumps[ji].time == t) {
      tag = std::int32_t(ji);  // at most one in practice
      ++ji;
    }
    out.jump_at.push_back(tag);
    out.base_node.push_back(int(out.times.size()) - 1);
  }

  const int intervals = int(out.times.size()) - 1;
  out.dw.resize(std::size_t(intervals) * dim);
  const rng::Stream stream({seed, path, rng::Purpose::diffusion});
  for (int i = 0; i < intervals; ++i) {
    const double sqrt_dt = std::sqrt(out.times[i + 1] - out.times[i]);
    for (int j = 0; j < dim; ++j)
      out.dw[std::size_t(i) * dim + j] =
          sqrt_dt * stream.normal(std::uint64_t(i) * dim + j);
  }
}

std::vector<double> merge_increments(const NoiseBundle& fine,
                                     const std::vector<double>& coarse_nodes) {
  const int dim = fine.dim;
  std::vector<double> out((coarse_nodes.size() - 1) * dim, 0.0);
  std::size_t c = 0;
  for (int i = 0; i < fine.intervals(); ++i) {
    while (c + 2 < coarse_nodes.size() && fine.times[i] >= coarse_nodes[c + 1]) ++c;
    for (int j = 0; j < dim; ++j) out[c * dim + j] += fine.increment(i, j);
  }
  return out;
}

}  // namespace jdg
