#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <jdg/linalg.hpp>
#include <jdg/noise.hpp>
#include <jdg/truncation.hpp>

namespace jdg {

struct SimulatedPath;  // simulate.hpp

enum class WeightFamily {
  bel_delta,
  bel_gamma,
  hypoelliptic,
  svj_delta,
  svj_gamma,
  svjj_delta,
};

const char* to_string(WeightFamily f);

// Whether the first state coordinate is the spot itself or its logarithm;
// drives the chain-rule factors between d/dz_1 and d/dS0.
enum class SpotCoordinate { level, log_price };

// Model-specific auxiliary integrals accumulated during simulation.
enum class AuxFamily { none, exp_levy_asian };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One jump-diffusion dx = Z dt + X dW + Y d(mu - nu). The drift field holds
// the SDE's Z; the compensator term (integral of Y against the jump measure,
// intensity included) is supplied separately and subtracted by the
// integrator, so jump events add the raw Y at jump times.
struct ModelSpec {
  std::string name;
  int dim = 0;           // state dimension d
  int brownian_dim = 0;  // driving Brownian dimension m
  Vec z0;                // initial state

  std::function<Vec(double, const Vec&)> drift;
  std::function<Mat(double, const Vec&)> diffusion;           // d x m
  std::function<Mat(double, const Vec&)> drift_jacobian;      // d x d
  std::function<Mat(double, const Vec&, int)> diffusion_col_jacobian;  // d x d per column

  std::optional<JumpSourceSpec> jumps;
  std::function<Vec(double, const Vec&, double)> jump_coeff;     // Y(t, x, y)
  std::function<Mat(double, const Vec&, double)> jump_jacobian;  // grad_x Y
  std::function<Vec(double, const Vec&)> jump_compensator;       // int Y dG (with intensity)
  std::function<Mat(double, const Vec&)> jump_compensator_jacobian;

  // Hessian contractions H(u, v) for the second variation; absent means zero
  // (exact for every shipped model: coefficients are affine in the
  // coordinates the spot direction reaches).
  std::function<Vec(double, const Vec&, const Vec&, const Vec&)> drift_hessian;
  std::function<Vec(double, const Vec&, const Vec&, const Vec&, int)> diffusion_col_hessian;
  std::function<Vec(double, const Vec&, double, const Vec&, const Vec&)> jump_hessian;

  // Declared uniform ellipticity floor for X X^T along paths; 0 flags a
  // degenerate (hypoelliptic) model.
  double ellipticity = 0.0;

  SpotCoordinate spot_coord = SpotCoordinate::level;
  double spot0 = 0.0;
  std::function<Vec(double)> initial_state_for_spot;  // bumped FD legs

  // Observation map state -> quoted quantities (spot first, running average
  // second for the Asian models) and its Jacobian.
  std::function<Vec(const Vec&)> observe;
  std::function<Mat(const Vec&)> observe_jacobian;  // q x d
  int observed_dim = 1;

  std::set<WeightFamily> families;
  bool class_j_weights_ok = false;  // indicator payoffs admissible unlocalised
  AuxFamily aux = AuxFamily::none;

  // Theorem-4 second term: per-coordinate dC_T/dh_k matrices, hand-derived
  // per model from its auxiliary integrals (empty => term vanishes).
  std::function<std::vector<Mat>(const SimulatedPath&)> cov_h_derivatives;

  // Parameters kept around for weights/oracles.
  double levy_sigma = 0.0;

  bool has_family(WeightFamily f) const { return families.count(f) > 0; }
  Vec spot_direction() const;  // dz/dS0
};

// Heston-with-jumps parameter block (SVJ; gamma_v > 0 adds the simultaneous
// deterministic-size variance jump of the SVJJ/Matytsin model).
struct SvjParams {
  double r = 0.0;
  double rho = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double eta = 0.0;
  double sigma0_sq = 0.0;
  double lambda = 0.0;
  double jump_mean = 0.0;
  double jump_sd = 0.0;
  double gamma_v = 0.0;  // variance jump size, SVJJ only
  double spot = 0.0;

  void validate() const;  // 2*kappa*theta > eta^2, |rho| < 1, ...
  double feller_delta() const { return 4.0 * kappa * theta / (eta * eta); }
};

ModelSpec make_gbm(double spot, double rate, double sigma);
ModelSpec make_gbm_log(double spot, double rate, double sigma);
ModelSpec make_merton(double spot, double rate, double sigma, double intensity,
                      double jump_mean, double jump_sd);
ModelSpec make_bachelier_jump_asian(double spot, double sigma, double jump_rate);
ModelSpec make_exp_levy_asian(double spot, double beta, double sigma,
                              double intensity, double log_jump_mean,
                              double log_jump_sd, double delta_trunc);
ModelSpec make_svj(const SvjParams& p, const TruncationLevel& trunc);
ModelSpec make_svjj(const SvjParams& p, const TruncationLevel& trunc);

}  // namespace jdg
