#pragma once

#include <string>

#include <jdg/model.hpp>
#include <jdg/simulate.hpp>

namespace jdg {

struct OracleValue {
  double value = 0.0;
  double accuracy = 0.0;  // declared absolute accuracy
  std::string method;
};

// Undiscounted Black-Scholes call sensitivities: N(d1) and phi(d1)/(S0 sigma sqrt(T)).
OracleValue bs_delta(double spot, double strike, double sigma, double rate, double expiry);
OracleValue bs_gamma(double spot, double strike, double sigma, double rate, double expiry);
double bs_call_price(double spot, double strike, double sigma, double rate, double expiry);

// Poisson-weighted Black-Scholes series for the Merton model with
// compensated multiplicative jumps e^y - 1, y ~ N(jump_mean, jump_sd^2).
// Terms are added until the Poisson tail bound drops under the declared
// accuracy; throws if the cap is hit first.
OracleValue merton_delta(double spot, double strike, double sigma, double rate,
                         double expiry, double intensity, double jump_mean,
                         double jump_sd, int max_terms = 256);

// Example-1 closed form (6/(sigma T)) ((1/T) int W dt - W_T / 3) evaluated by
// left-point quadrature on the path's own Brownian increments.
double bachelier_asian_weight_oracle(const SimulatedPath& path);

}  // namespace jdg
