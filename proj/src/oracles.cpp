#include <jdg/oracles.hpp>

#include <cmath>
#include <stdexcept>

#include <jdg/rng.hpp>

namespace jdg {

namespace {

double d1(double spot, double strike, double sigma, double rate, double expiry) {
  return (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * expiry) /
         (sigma * std::sqrt(expiry));
}

void check_bs_args(double spot, double strike, double sigma, double expiry) {
  if (!(spot > 0.0) || !(strike > 0.0) || !(sigma > 0.0) || !(expiry > 0.0))
    throw std::invalid_argument("Black-Scholes oracle needs positive spot/strike/sigma/T");
}

}  // namespace

OracleValue bs_delta(double spot, double strike, double sigma, double rate,
                     double expiry) {
  check_bs_args(spot, strike, sigma, expiry);
  return {rng::normal_cdf(d1(spot, strike, sigma, rate, expiry)), 1e-12,
          "black-scholes"};
}

OracleValue bs_gamma(double spot, double strike, double sigma, double rate,
                     double expiry) {
  check_bs_args(spot, strike, sigma, expiry);
  const double g = rng::normal_pdf(d1(spot, strike, sigma, rate, expiry)) /
                   (spot * sigma * std::sqrt(expiry));
  return {g, 1e-12, "black-scholes"};
}

double bs_call_price(double spot, double strike, double sigma, double rate,
                     double expiry) {
  check_bs_args(spot, strike, sigma, expiry);
  const double v = sigma * std::sqrt(expiry);
  const double dd1 = d1(spot, strike, sigma, rate, expiry);
  // undiscounted E[(S_T - K)+] under drift `rate`
  return spot * std::exp(rate * expiry) * rng::normal_cdf(dd1) -
         strike * rng::normal_cdf(dd1 - v);
}

OracleValue merton_delta(double spot, double strike, double sigma, double rate,
                         double expiry, double intensity, double jump_mean,
                         double jump_sd, int max_terms) {
  check_bs_args(spot, strike, sigma, expiry);
  if (intensity < 0.0) throw std::invalid_argument("jump intensity must be >= 0");

  // Compensated multiplicative jumps: E[S_T | n jumps] carries the factor
  // exp(-lambda kbar T + n(m + s^2/2)).
  const double kbar = std::expm1(jump_mean + 0.5 * jump_sd * jump_sd);
  const double mu = intensity * expiry;
  constexpr double target = 1e-12;

  double pmf = std::exp(-mu);
  double delta = 0.0;
  double tail = 1.0;
  int n = 0;
  for (; n <= max_terms; ++n) {
    if (n > 0) pmf *= mu / double(n);
    tail -= pmf;
    const double fwd_factor =
        std::exp((rate - intensity * kbar) * expiry +
                 double(n) * (jump_mean + 0.5 * jump_sd * jump_sd));
    const double v = std::sqrt(sigma * sigma * expiry + double(n) * jump_sd * jump_sd);
    const double dd1 = std::log(spot * fwd_factor / strike) / v + 0.5 * v;
    delta += pmf * fwd_factor * rng::normal_cdf(dd1);
    // conditional forward factors grow ~ e^{n m}; bound the remaining mass
    if (tail * std::exp(double(n + 1) * std::max(jump_mean + jump_sd * jump_sd, 0.0)) <
        target)
      break;
  }
  if (n > max_terms)
    throw std::invalid_argument("merton_delta: series needs more terms than allowed");
  return {delta, target, "merton-series"};
}

double bachelier_asian_weight_oracle(const SimulatedPath& path) {
  const double t_end = path.grid->horizon;
  const double sigma = path.model->diffusion(0.0, path.model->z0)(0, 0);
  double w = 0.0;
  double int_w_dt = 0.0;
  for (int i = 0; i + 1 < path.nodes(); ++i) {
    const double dt = path.times[std::size_t(i) + 1] - path.times[std::size_t(i)];
    int_w_dt += w * dt;  // left point
    w += path.noise->increment(i, 0);
  }
  return 6.0 / (sigma * t_end) * (int_w_dt / t_end - w / 3.0);
}

}  // namespace jdg
