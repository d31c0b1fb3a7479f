#include <doctest.h>

#include <cmath>

#include <jdg/rng.hpp>

using namespace jdg;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (kat_vectors).
  auto out = rng::Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = rng::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = rng::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are pure functions of (seed, path, purpose, index)") {
  const rng::Stream a({7, 0, rng::Purpose::diffusion});
  const rng::Stream b({7, 0, rng::Purpose::diffusion});
  for (std::uint64_t i = 0; i < 64; ++i) CHECK(a.uniform(i) == b.uniform(i));

  const rng::Stream other_path({7, 1, rng::Purpose::diffusion});
  const rng::Stream other_purpose({7, 0, rng::Purpose::jumps});
  CHECK(a.uniform(0) != other_path.uniform(0));
  CHECK(a.uniform(0) != other_purpose.uniform(0));
}

TEST_CASE("inverse normal cdf matches known quantiles and round-trips") {
  CHECK(rng::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rng::inverse_normal_cdf(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(rng::inverse_normal_cdf(0.84134474606854293) ==
        doctest::Approx(1.0).epsilon(1e-12));

  for (double p : {1e-10, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-6}) {
    const double x = rng::inverse_normal_cdf(p);
    CHECK(rng::normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("uniform draws have the right first two moments") {
  const rng::Stream s({2024, 3, rng::Purpose::diffusion});
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(std::uint64_t(i));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}
