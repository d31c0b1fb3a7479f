#include <doctest.h>

#include <cmath>

#include <jdg/noise.hpp>

using namespace jdg;

TEST_CASE("grid construction honors mandatory nodes and step bound") {
  const TimeGrid g = TimeGrid::uniform(1.0, 7, {0.5, 1.0});
  CHECK(g.nodes.front() == 0.0);
  CHECK(g.nodes.back() == 1.0);
  bool has_half = false;
  for (double t : g.nodes) has_half |= (t == 0.5);
  CHECK(has_half);
  for (std::size_t i = 1; i < g.nodes.size(); ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
  CHECK(g.max_step() <= 2.0 / 7.0);

  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::uniform(1.0, 4, {1.5}), std::invalid_argument);
}

TEST_CASE("degenerate one-node grid yields no increments") {
  TimeGrid g;
  g.horizon = 0.0;
  g.n_steps = 0;
  g.nodes = {0.0};
  const auto inc = sample_brownian(g, 2, {1, 0, rng::Purpose::diffusion});
  CHECK(inc.empty());
}

TEST_CASE("brownian sampling is deterministic in the key") {
  const TimeGrid g = TimeGrid::uniform(1.0, 16);
  const auto a = sample_brownian(g, 2, {7, 0, rng::Purpose::diffusion});
  const auto b = sample_brownian(g, 2, {7, 0, rng::Purpose::diffusion});
  CHECK(a == b);
  const auto c = sample_brownian(g, 2, {7, 1, rng::Purpose::diffusion});
  CHECK(a != c);
}

TEST_CASE("brownian increments match N(0, dt) moments") {
  // One-step grid with dt = 1, one million draws across paths.
  const TimeGrid g = TimeGrid::uniform(1.0, 1);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (int p = 0; p < n; ++p) {
    const auto inc = sample_brownian(g, 1, {99, std::uint64_t(p), rng::Purpose::diffusion});
    sum += inc[0];
    sumsq += inc[0] * inc[0];
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("compound poisson stream: zero intensity, law, and moments") {
  CHECK(sample_compound_poisson(0.0, MarkLaw::point_mass(1.0), 1.0, 1, 0).empty());
  CHECK_THROWS_AS(sample_compound_poisson(-1.0, MarkLaw::point_mass(1.0), 1.0, 1, 0),
                  std::invalid_argument);

  // The production jump stream: rate 1, normal marks mean -0.1 sd 0.1.
  const MarkLaw law = MarkLaw::normal(-0.1, 0.1);
  double count_sum = 0.0, count_sumsq = 0.0, mark_sum = 0.0;
  std::uint64_t mark_n = 0;
  const int paths = 100000;
  for (int p = 0; p < paths; ++p) {
    const auto events = sample_compound_poisson(1.0, law, 1.0, 5, std::uint64_t(p));
    count_sum += double(events.size());
    count_sumsq += double(events.size()) * double(events.size());
    for (std::size_t i = 1; i < events.size(); ++i)
      CHECK(events[i].time >= events[i - 1].time);
    for (const auto& e : events) {
      CHECK(e.time > 0.0);
      CHECK(e.time <= 1.0);
      mark_sum += e.mark;
      ++mark_n;
    }
  }
  const double mean_count = count_sum / paths;
  const double var_count = count_sumsq / paths - mean_count * mean_count;
  const double se = std::sqrt(1.0 / paths);
  CHECK(std::fabs(mean_count - 1.0) < 4.0 * se);
  CHECK(var_count == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::fabs(mark_sum / double(mark_n) + 0.1) <
        4.0 * 0.1 / std::sqrt(double(mark_n)));
}

TEST_CASE("poisson mean matches intensity*horizon at rate 2") {
  double count_sum = 0.0;
  const int paths = 100000;
  for (int p = 0; p < paths; ++p)
    count_sum += double(sample_compound_poisson(2.0, MarkLaw::point_mass(1.0), 1.0, 11,
                                                std::uint64_t(p))
                            .size());
  const double se = std::sqrt(2.0 / paths);
  CHECK(std::fabs(count_sum / paths - 2.0) < 3.0 * se);
}

TEST_CASE("noise bundle: jump-adapted timeline, reproducibility, CRN pairing") {
  const TimeGrid g = TimeGrid::uniform(1.0, 32, {0.5, 1.0});
  const JumpSourceSpec jumps{2.0, MarkLaw::normal(-0.1, 0.1)};

  NoiseBundle a, b;
  build_noise(g, 2, jumps, 42, 17, a);
  build_noise(g, 2, jumps, 42, 17, b);
  CHECK(a.times == b.times);
  CHECK(a.dw == b.dw);
  CHECK(a.jumps.size() == b.jumps.size());

  for (double t : g.nodes) {
    bool found = false;
    for (double s : a.times) found |= (s == t);
    CHECK(found);
  }
  for (std::size_t i = 1; i < a.times.size(); ++i) CHECK(a.times[i] > a.times[i - 1]);
  int flagged = 0;
  for (auto j : a.jump_at) flagged += (j >= 0);
  CHECK(flagged == int(a.jumps.size()));

  const NoiseBundle& paired = paired_noise_for_bump(a);
  CHECK(&paired == &a);  // identical randomness, bit for bit
}

TEST_CASE("merged increments reproduce coarse-interval sums exactly") {
  const TimeGrid fine_grid = TimeGrid::uniform(1.0, 64);
  const TimeGrid coarse_grid = TimeGrid::uniform(1.0, 16);
  NoiseBundle fine;
  build_noise(fine_grid, 2, std::nullopt, 3, 5, fine);

  const auto merged = merge_increments(fine, coarse_grid.nodes);
  REQUIRE(merged.size() == std::size_t(coarse_grid.intervals()) * 2);

  // Brownian scaling: each coarse increment is exactly the sum of its
  // sub-interval increments, and the terminal value is preserved.
  for (int j = 0; j < 2; ++j) {
    double total_fine = 0.0, total_coarse = 0.0;
    for (int i = 0; i < fine.intervals(); ++i) total_fine += fine.increment(i, j);
    for (int c = 0; c < coarse_grid.intervals(); ++c)
      total_coarse += merged[std::size_t(c) * 2 + j];
    CHECK(total_fine == doctest::Approx(total_coarse).epsilon(1e-15));
  }
  double s = 0.0;
  for (int i = 0; i < fine.intervals(); ++i)
    if (fine.times[i] >= coarse_grid.nodes[3] && fine.times[i] < coarse_grid.nodes[4])
      s += fine.increment(i, 0);
  CHECK(s == merged[3 * 2 + 0]);
}

TEST_CASE("truncated shifted-lognormal mark law: band, mean, sampling") {
  const MarkLaw law = MarkLaw::shifted_lognormal(-0.1, 0.1, -0.5, 1.0);
  CHECK(law.band_probability() > 0.99);
  const rng::Stream s({1, 2, rng::Purpose::marks});
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double y = law.sample(s.uniform(std::uint64_t(i)));
    CHECK(y >= -0.5);
    CHECK(y <= 1.0);
    mean += y;
  }
  mean /= n;
  CHECK(mean == doctest::Approx(law.mean()).epsilon(2e-3));
}
