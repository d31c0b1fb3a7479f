#pragma once

#include <functional>
#include <string>
#include <vector>

#include <jdg/model.hpp>

namespace jdg {

enum class Regularity { smooth_bounded, lipschitz, class_j };

// One consumed observation: which date and which observed component
// (0 = spot, 1 = running average for the Asian models).
struct PayoffInput {
  int date = 0;
  int component = 0;
};

// Every shipped contract factors through an affine reduction
// u = sum_i coeff_i * s_i of its observations, with a scalar profile f(u).
// That keeps localisation one-dimensional: discontinuities live on the
// u-axis regardless of arity.
struct Payoff {
  std::string name;
  std::vector<double> obs_dates;     // T_1 <= ... <= T_n
  std::vector<PayoffInput> inputs;   // aligned with coeffs
  std::vector<double> coeffs;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;  // a.e. derivative (pathwise leg)
  Regularity regularity = Regularity::lipschitz;
  std::vector<double> discontinuities;
  double scale_hint = 1.0;

  double reduce(const std::vector<double>& obs_values) const;
  double first_date() const { return obs_dates.front(); }
};

Payoff european_call(double strike, double expiry);
Payoff double_digital(double k1, double k2, double expiry);
Payoff digital_cliquet(double k1, double k2, double t1, double expiry);
Payoff asian_fixed_strike(double strike, double expiry);

// Localisation split f = g + f_tilde on the reduced variable: g replaces each
// jump of f by a cubic smoothstep ramp over [d - Wh, d + Wh] and equals f
// exactly outside the windows; f_tilde is bounded with support in the windows.
struct LocalisationSplit {
  double bandwidth = 0.0;
  double window = 1.0;
  std::vector<std::pair<double, double>> windows;
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
  std::function<double(double)> f_tilde;
};

LocalisationSplit localise(const Payoff& payoff, double bandwidth, double window = 1.0);

}  // namespace jdg
