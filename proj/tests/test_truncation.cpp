#include <doctest.h>

#include <cmath>
#include <functional>

#include <jdg/truncation.hpp>

using namespace jdg;

namespace {

// central differences on a smooth scalar function
double fd1(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("truncation level: exponent and floor") {
  // production-style parameters: delta = 4*4*0.08/0.36
  const double feller = 4.0 * 4.0 * 0.08 / 0.36;
  TruncationLevel t;
  t.n = 1000;
  t.floor_override = 1e-4;
  CHECK(t.xi(feller) == doctest::Approx(0.5 * (0.5 * feller - 1.0)));
  CHECK(t.xi(feller) > 0.0);
  CHECK(t.floor(feller) == 1e-4);
  t.floor_override.reset();
  CHECK(t.floor(feller) == doctest::Approx(std::pow(1000.0, -t.xi(feller))));

  TruncationLevel bad;
  bad.n = 1;
  CHECK_THROWS_AS(bad.validate(feller), std::invalid_argument);
  TruncationLevel bad_feller;
  CHECK_THROWS_AS(bad_feller.validate(1.9), std::invalid_argument);  // xi <= 0
}

TEST_CASE("h/g/p plateaus evaluate the raw coefficients bit-exactly") {
  const SvjTruncation tf(1000.0, 1e-4, 0.115);
  for (double x : {1e-3, 0.05, 0.3, 2.0, 999.0}) {
    CHECK(tf.h(x) == 0.5 * x * x);
    CHECK(tf.p(x) == x);
  }
  for (double x : {1e-3 + 1e-6, 0.05, 0.3, 2.0}) CHECK(tf.g(x) == 0.115 / x);
  CHECK(tf.h(1002.0) == 0.0);
  CHECK(tf.g(0.0004) == 0.0);
  CHECK(tf.g(-1.0) == 0.0);
  CHECK(tf.p(0.0) == 1e-4);
  CHECK(tf.p(-3.0) == 1e-4);
}

TEST_CASE("bridges keep the sandwich bounds") {
  const SvjTruncation tf(10.0, 0.25, 0.115);  // wide bridges so the sweep sees them

  // h <= x^2/2 everywhere, h >= 0
  for (double x = 9.5; x <= 11.6; x += 1e-3) {
    CHECK(tf.h(x) <= 0.5 * x * x + 1e-12);
    CHECK(tf.h(x) >= -1e-12);
  }
  // 0 <= g <= c/x on the bridge [1/(2N), 1/N]
  for (double x = 0.05; x <= 0.1; x += 1e-5) {
    CHECK(tf.g(x) >= -1e-12);
    CHECK(tf.g(x) <= 0.115 / x + 1e-12);
  }
  // floor/2 <= p, max(x, ...) <= p <= floor on the bridge [0, floor]
  for (double x = 0.0; x <= 0.25; x += 1e-4) {
    CHECK(tf.p(x) >= 0.5 * 0.25 - 1e-12);
    CHECK(tf.p(x) >= x - 1e-12);
    CHECK(tf.p(x) <= 0.25 + 1e-12);
  }
}

TEST_CASE("bridges are C^1 with consistent derivatives") {
  const SvjTruncation tf(10.0, 0.25, 0.115);
  const auto h = [&](double x) { return tf.h(x); };
  const auto g = [&](double x) { return tf.g(x); };
  const auto p = [&](double x) { return tf.p(x); };

  for (double x : {9.9, 10.0, 10.3, 10.7, 11.0, 11.1}) {
    CHECK(tf.h_prime(x) == doctest::Approx(fd1(h, x, 1e-6)).epsilon(1e-5));
  }
  for (double x : {0.051, 0.06, 0.08, 0.099, 0.12}) {
    CHECK(tf.g_prime(x) == doctest::Approx(fd1(g, x, 1e-7)).epsilon(1e-4));
  }
  for (double x : {0.01, 0.1, 0.2, 0.24, 0.3}) {
    CHECK(tf.p_prime(x) == doctest::Approx(fd1(p, x, 1e-7)).epsilon(1e-4));
  }

  // second-difference continuity across the splice points (C^2 check)
  const double eps = 1e-4;
  for (double splice : {10.0, 11.0}) {
    const double left = (h(splice) - 2.0 * h(splice - eps) + h(splice - 2.0 * eps)) / (eps * eps);
    const double right = (h(splice + 2.0 * eps) - 2.0 * h(splice + eps) + h(splice)) / (eps * eps);
    CHECK(left == doctest::Approx(right).epsilon(0.05).scale(1.0));
  }
}

TEST_CASE("smoothstep endpoints") {
  CHECK(smoothstep5(0.0) == 0.0);
  CHECK(smoothstep5(1.0) == 1.0);
  CHECK(smoothstep5_prime(0.0) == 0.0);
  CHECK(smoothstep5_prime(1.0) == 0.0);
}
