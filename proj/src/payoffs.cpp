#include <jdg/payoffs.hpp>

#include <algorithm>
#include <cmath>

namespace jdg {

double Payoff::reduce(const std::vector<double>& obs_values) const {
  double u = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) u += coeffs[i] * obs_values[i];
  return u;
}

Payoff european_call(double strike, double expiry) {
  if (!std::isfinite(strike)) throw ConfigError("call strike must be finite");
  Payoff p;
  p.name = "european_call";
  p.obs_dates = {expiry};
  p.inputs = {{0, 0}};
  p.coeffs = {1.0};
  p.f = [strike](double u) { return std::max(u - strike, 0.0); };
  p.f_prime = [strike](double u) { return u > strike ? 1.0 : 0.0; };
  p.regularity = Regularity::lipschitz;
  p.scale_hint = std::fabs(strike) > 0.0 ? std::fabs(strike) : 1.0;
  return p;
}

Payoff double_digital(double k1, double k2, double expiry) {
  if (!(k1 < k2)) throw ConfigError("double digital needs K1 < K2");
  Payoff p;
  p.name = "double_digital";
  p.obs_dates = {expiry};
  p.inputs = {{0, 0}};
  p.coeffs = {1.0};
  p.f = [k1, k2](double u) { return (u >= k1 && u <= k2) ? 1.0 : 0.0; };
  p.f_prime = [](double) { return 0.0; };
  p.regularity = Regularity::class_j;
  p.discontinuities = {k1, k2};
  p.scale_hint = k2 - k1;
  return p;
}

Payoff digital_cliquet(double k1, double k2, double t1, double expiry) {
  if (!(k1 < k2)) throw ConfigError("digital cliquet needs K1* < K2*");
  if (!(t1 > 0.0) || !(t1 < expiry))
    throw ConfigError("digital cliquet needs 0 < T1 < T");
  Payoff p;
  p.name = "digital_cliquet";
  p.obs_dates = {t1, expiry};
  p.inputs = {{0, 0}, {1, 0}};
  p.coeffs = {-1.0, 1.0};  // u = S_T - S_T1
  p.f = [k1, k2](double u) { return (u >= k1 && u <= k2) ? 1.0 : 0.0; };
  p.f_prime = [](double) { return 0.0; };
  p.regularity = Regularity::class_j;
  p.discontinuities = {k1, k2};
  p.scale_hint = k2 - k1;
  return p;
}

Payoff asian_fixed_strike(double strike, double expiry) {
  if (!std::isfinite(strike)) throw ConfigError("asian strike must be finite");
  Payoff p;
  p.name = "asian_fixed_strike";
  p.obs_dates = {expiry};
  p.inputs = {{0, 1}};         // running average component
  p.coeffs = {1.0 / expiry};   // u = A_T / T
  p.f = [strike](double u) { return std::max(u - strike, 0.0); };
  p.f_prime = [strike](double u) { return u > strike ? 1.0 : 0.0; };
  p.regularity = Regularity::lipschitz;
  p.scale_hint = std::fabs(strike) > 0.0 ? std::fabs(strike) : 1.0;
  return p;
}

namespace {

// Cubic smoothstep ramp; C^1 with zero slope at both ends.
double ramp(double t) { return t * t * (3.0 - 2.0 * t); }
double ramp_prime(double t) { return 6.0 * t * (1.0 - t); }

}  // namespace

LocalisationSplit localise(const Payoff& payoff, double bandwidth, double window) {
  LocalisationSplit split;
  split.bandwidth = bandwidth;
  split.window = window;

  if (payoff.regularity != Regularity::class_j || payoff.discontinuities.empty()) {
    // Nothing to localise: g = f, f_tilde = 0.
    split.g = payoff.f;
    split.g_prime = payoff.f_prime ? payoff.f_prime
                                   : std::function<double(double)>([](double) { return 0.0; });
    split.f_tilde = [](double) { return 0.0; };
    return split;
  }
  if (!(bandwidth > 0.0)) throw ConfigError("localisation bandwidth must be positive");
  if (!(window > 0.0)) throw ConfigError("localisation window factor must be positive");

  std::vector<double> discs = payoff.discontinuities;
  std::sort(discs.begin(), discs.end());
  const double half = window * bandwidth;
  for (std::size_t i = 0; i + 1 < discs.size(); ++i) {
    if (discs[i + 1] - discs[i] <= 2.0 * half)
      throw ConfigError(
          "overlapping localisation windows around discontinuities " +
          std::to_string(discs[i]) + " and " + std::to_string(discs[i + 1]) +
          "; shrink the bandwidth or window factor");
  }
  for (double d : discs) split.windows.emplace_back(d - half, d + half);

  const auto f = payoff.f;
  const auto windows = split.windows;
  split.g = [f, windows](double u) {
    for (const auto& [lo, hi] : windows) {
      if (u > lo && u < hi) {
        const double flo = f(lo), fhi = f(hi);
        return flo + ramp((u - lo) / (hi - lo)) * (fhi - flo);
      }
    }
    return f(u);
  };
  split.g_prime = [f, windows](double u) {
    for (const auto& [lo, hi] : windows) {
      if (u > lo && u < hi)
        return ramp_prime((u - lo) / (hi - lo)) * (f(hi) - f(lo)) / (hi - lo);
    }
    return 0.0;
  };
  const auto g = split.g;
  split.f_tilde = [f, g](double u) { return f(u) - g(u); };
  return split;
}

}  // namespace jdg
