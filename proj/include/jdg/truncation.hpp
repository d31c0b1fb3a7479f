#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace jdg {

// Truncation level for the approximating SVJ/SVJJ system. N caps the h/g
// coefficient plateaus at N and 1/N; the volatility diffusion floor defaults
// to N^{-xi} with xi = (delta/2 - 1)/2, delta = 4*kappa*theta/eta^2, and can
// be pinned directly (the production default pins 1e-4).
struct TruncationLevel {
  int n = 1000;
  std::optional<double> floor_override = 1e-4;

  double xi(double feller_delta) const { return 0.5 * (0.5 * feller_delta - 1.0); }
  double floor(double feller_delta) const {
    if (floor_override) return *floor_override;
    return std::pow(double(n), -xi(feller_delta));
  }
  void validate(double feller_delta) const {
    if (n < 2) throw std::invalid_argument("truncation level N must be >= 2");
    if (xi(feller_delta) <= 0.0)
      throw std::invalid_argument("truncation exponent xi must be positive (needs 2*kappa*theta > eta^2)");
    if (floor_override && *floor_override <= 0.0)
      throw std::invalid_argument("truncation floor must be positive");
  }
};

// C^2 monotone quintic smoothstep on [0,1].
inline double smoothstep5(double t) {
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}
inline double smoothstep5_prime(double t) {
  const double a = t * (1.0 - t);
  return 30.0 * a * a;
}

// The truncated SVJ coefficient functions h, g, p. Plateau regions evaluate
// the raw coefficients exactly (bitwise), so on paths that never leave the
// band the truncated and raw systems agree path-for-path. Bridges are C^2
// blends that keep the sandwich bounds: 0 <= h <= x^2/2, 0 <= g <= c/x,
// floor/2 <= max(x, ...) <= p <= max(x, floor).
struct SvjTruncation {
  double cap = 0.0;      // N
  double floor_p = 0.0;  // volatility diffusion floor
  double g_coeff = 0.0;  // kappa*theta/2 - eta^2/8

  SvjTruncation() = default;
  SvjTruncation(double cap_n, double floor_value, double g_c)
      : cap(cap_n), floor_p(floor_value), g_coeff(g_c) {}

  double h(double x) const {
    const double a = std::fabs(x);
    if (a <= cap) return 0.5 * x * x;
    if (a >= cap + 1.0) return 0.0;
    return (1.0 - smoothstep5(a - cap)) * 0.5 * x * x;
  }
  double h_prime(double x) const {
    const double a = std::fabs(x);
    if (a <= cap) return x;
    if (a >= cap + 1.0) return 0.0;
    const double t = a - cap;
    const double d = -smoothstep5_prime(t) * 0.5 * a * a + (1.0 - smoothstep5(t)) * a;
    return x < 0.0 ? -d : d;
  }

  double g(double x) const {
    const double lo = 0.5 / cap, hi = 1.0 / cap;
    if (x >= hi) return g_coeff / x;
    if (x <= lo) return 0.0;
    return smoothstep5((x - lo) / (hi - lo)) * g_coeff / x;
  }
  double g_prime(double x) const {
    const double lo = 0.5 / cap, hi = 1.0 / cap;
    if (x >= hi) return -g_coeff / (x * x);
    if (x <= lo) return 0.0;
    const double t = (x - lo) / (hi - lo);
    return smoothstep5_prime(t) / (hi - lo) * g_coeff / x -
           smoothstep5(t) * g_coeff / (x * x);
  }

  double p(double x) const {
    if (x >= floor_p) return x;
    if (x <= 0.0) return floor_p;
    const double s = smoothstep5(x / floor_p);
    return floor_p + s * (x - floor_p);
  }
  double p_prime(double x) const {
    if (x >= floor_p) return 1.0;
    if (x <= 0.0) return 0.0;
    const double t = x / floor_p;
    return smoothstep5_prime(t) / floor_p * (x - floor_p) + smoothstep5(t);
  }
};

}  // namespace jdg
