#include <jdg/model.hpp>

#include <cmath>

#include <jdg/simulate.hpp>

namespace jdg {

const char* to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::bel_delta: return "bel_delta";
    case WeightFamily::bel_gamma: return "bel_gamma";
    case WeightFamily::hypoelliptic: return "hypoelliptic";
    case WeightFamily::svj_delta: return "svj_delta";
    case WeightFamily::svj_gamma: return "svj_gamma";
    case WeightFamily::svjj_delta: return "svjj_delta";
  }
  return "unknown";
}

Vec ModelSpec::spot_direction() const {
  Vec dir = Vec::Zero(dim);
  dir(0) = spot_coord == SpotCoordinate::level ? 1.0 : 1.0 / spot0;
  return dir;
}

void SvjParams::validate() const {
  if (!(2.0 * kappa * theta > eta * eta))
    throw std::invalid_argument("SVJ parameters must satisfy 2*kappa*theta > eta^2");
  if (!(std::fabs(rho) < 1.0))
    throw std::invalid_argument("SVJ correlation must satisfy |rho| < 1");
  if (!(sigma0_sq > 0.0))
    throw std::invalid_argument("SVJ initial variance must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("SVJ vol-of-vol must be positive");
  if (lambda < 0.0) throw std::invalid_argument("jump intensity must be >= 0");
  if (gamma_v < 0.0) throw std::invalid_argument("variance jump size must be >= 0");
  if (!(spot > 0.0)) throw std::invalid_argument("spot must be positive");
}

namespace {

Mat zero_mat(int r, int c) { return Mat::Zero(r, c); }

void set_level_spot_observation(ModelSpec& m) {
  m.observe = [](const Vec& x) {
    Vec o(1);
    o(0) = x(0);
    return o;
  };
  m.observe_jacobian = [](const Vec&) {
    Mat j(1, 1);
    j(0, 0) = 1.0;
    return j;
  };
  m.observed_dim = 1;
}

void set_state_observation_2d(ModelSpec& m) {
  m.observe = [](const Vec& x) { return x; };
  m.observe_jacobian = [](const Vec&) { return Mat::Identity(2, 2); };
  m.observed_dim = 2;
}

}  // namespace

ModelSpec make_gbm(double spot, double rate, double sigma) {
  if (!(spot > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("GBM needs positive spot and volatility");
  ModelSpec m;
  m.name = "gbm";
  m.dim = 1;
  m.brownian_dim = 1;
  m.z0 = Vec::Constant(1, spot);
  m.drift = [rate](double, const Vec& x) { return Vec::Constant(1, rate * x(0)); };
  m.diffusion = [sigma](double, const Vec& x) {
    Mat d(1, 1);
    d(0, 0) = sigma * x(0);
    return d;
  };
  m.drift_jacobian = [rate](double, const Vec&) {
    Mat j(1, 1);
    j(0, 0) = rate;
    return j;
  };
  m.diffusion_col_jacobian = [sigma](double, const Vec&, int) {
    Mat j(1, 1);
    j(0, 0) = sigma;
    return j;
  };
  m.spot_coord = SpotCoordinate::level;
  m.spot0 = spot;
  m.initial_state_for_spot = [](double s) { return Vec::Constant(1, s); };
  set_level_spot_observation(m);
  m.families = {WeightFamily::bel_delta, WeightFamily::bel_gamma};
  return m;
}

ModelSpec make_gbm_log(double spot, double rate, double sigma) {
  if (!(spot > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("GBM needs positive spot and volatility");
  ModelSpec m;
  m.name = "gbm-log";
  m.dim = 1;
  m.brownian_dim = 1;
  m.z0 = Vec::Constant(1, std::log(spot));
  const double mu = rate - 0.5 * sigma * sigma;
  m.drift = [mu](double, const Vec&) { return Vec::Constant(1, mu); };
  m.diffusion = [sigma](double, const Vec&) {
    Mat d(1, 1);
    d(0, 0) = sigma;
    return d;
  };
  m.drift_jacobian = [](double, const Vec&) { return zero_mat(1, 1); };
  m.diffusion_col_jacobian = [](double, const Vec&, int) { return zero_mat(1, 1); };
  m.spot_coord = SpotCoordinate::log_price;
  m.spot0 = spot;
  m.initial_state_for_spot = [](double s) { return Vec::Constant(1, std::log(s)); };
  m.observe = [](const Vec& x) { return Vec::Constant(1, std::exp(x(0))); };
  m.observe_jacobian = [](const Vec& x) {
    Mat j(1, 1);
    j(0, 0) = std::exp(x(0));
    return j;
  };
  m.observed_dim = 1;
  m.ellipticity = sigma * sigma;
  m.families = {WeightFamily::bel_delta, WeightFamily::bel_gamma};
  return m;
}

ModelSpec make_merton(double spot, double rate, double sigma, double intensity,
                      double jump_mean, double jump_sd) {
  ModelSpec m = make_gbm(spot, rate, sigma);
  m.name = "merton";
  if (intensity < 0.0) throw std::invalid_argument("jump intensity must be >= 0");
  if (intensity == 0.0) return m;

  const MarkLaw law = MarkLaw::shifted_lognormal(
      jump_mean, jump_sd, -1.0, std::numeric_limits<double>::infinity());
  const double mean_jump = intensity * law.mean();  // lambda * (e^{m+s^2/2}-1)
  m.jumps = JumpSourceSpec{intensity, law};
  m.jump_coeff = [](double, const Vec& x, double y) {
    return Vec::Constant(1, x(0) * y);
  };
  m.jump_jacobian = [](double, const Vec&, double y) {
    Mat j(1, 1);
    j(0, 0) = y;
    return j;
  };
  m.jump_compensator = [mean_jump](double, const Vec& x) {
    return Vec::Constant(1, mean_jump * x(0));
  };
  m.jump_compensator_jacobian = [mean_jump](double, const Vec&) {
    Mat j(1, 1);
    j(0, 0) = mean_jump;
    return j;
  };
  return m;
}

ModelSpec make_bachelier_jump_asian(double spot, double sigma, double jump_rate) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Bachelier volatility must be positive");
  if (jump_rate < 0.0) throw std::invalid_argument("jump intensity must be >= 0");
  ModelSpec m;
  m.name = "bachelier-asian";
  m.dim = 2;
  m.brownian_dim = 1;
  m.z0 = Vec::Zero(2);
  m.z0(0) = spot;
  // dS = sigma dW + dN written against the compensated measure: the unit-mark
  // compensator sits in the drift and cancels there.
  m.drift = [jump_rate](double, const Vec& x) {
    Vec z(2);
    z(0) = jump_rate;
    z(1) = x(0);
    return z;
  };
  m.diffusion = [sigma](double, const Vec&) {
    Mat d = zero_mat(2, 1);
    d(0, 0) = sigma;
    return d;
  };
  m.drift_jacobian = [](double, const Vec&) {
    Mat j = zero_mat(2, 2);
    j(1, 0) = 1.0;
    return j;
  };
  m.diffusion_col_jacobian = [](double, const Vec&, int) { return zero_mat(2, 2); };
  if (jump_rate > 0.0) {
    m.jumps = JumpSourceSpec{jump_rate, MarkLaw::point_mass(1.0)};
    m.jump_coeff = [](double, const Vec&, double y) {
      Vec v = Vec::Zero(2);
      v(0) = y;
      return v;
    };
    m.jump_jacobian = [](double, const Vec&, double) { return zero_mat(2, 2); };
    m.jump_compensator = [jump_rate](double, const Vec&) {
      Vec v = Vec::Zero(2);
      v(0) = jump_rate;
      return v;
    };
    m.jump_compensator_jacobian = [](double, const Vec&) { return zero_mat(2, 2); };
  }
  m.spot_coord = SpotCoordinate::level;
  m.spot0 = spot;
  m.initial_state_for_spot = [](double s) {
    Vec z = Vec::Zero(2);
    z(0) = s;
    return z;
  };
  set_state_observation_2d(m);
  m.families = {WeightFamily::hypoelliptic};
  m.cov_h_derivatives = [](const SimulatedPath& p) {
    // Deterministic covariance: the perturbation derivative vanishes.
    return std::vector<Mat>{Mat::Zero(p.dim, p.dim), Mat::Zero(p.dim, p.dim)};
  };
  return m;
}

ModelSpec make_exp_levy_asian(double spot, double beta, double sigma,
                              double intensity, double log_jump_mean,
                              double log_jump_sd, double delta_trunc) {
  if (!(spot > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("exp-Levy needs positive spot and volatility");
  if (!(delta_trunc > 0.0) || !(delta_trunc < 1.0))
    throw std::invalid_argument("truncation level must lie in (0,1)");
  if (intensity < 0.0) throw std::invalid_argument("jump intensity must be >= 0");

  ModelSpec m;
  m.name = "explevy-asian";
  m.dim = 2;
  m.brownian_dim = 1;
  m.z0 = Vec::Zero(2);
  m.z0(0) = spot;
  m.drift = [beta](double, const Vec& x) {
    Vec z(2);
    z(0) = beta * x(0);
    z(1) = x(0);
    return z;
  };
  m.diffusion = [sigma](double, const Vec& x) {
    Mat d = zero_mat(2, 1);
    d(0, 0) = sigma * x(0);
    return d;
  };
  m.drift_jacobian = [beta](double, const Vec&) {
    Mat j = zero_mat(2, 2);
    j(0, 0) = beta;
    j(1, 0) = 1.0;
    return j;
  };
  m.diffusion_col_jacobian = [sigma](double, const Vec&, int) {
    Mat j = zero_mat(2, 2);
    j(0, 0) = sigma;
    return j;
  };
  if (intensity > 0.0) {
    // Truncated Levy measure: marks conditioned to [-1+delta, 1/delta] with
    // the intensity thinned by the band mass.
    const MarkLaw law = MarkLaw::shifted_lognormal(
        log_jump_mean, log_jump_sd, -1.0 + delta_trunc, 1.0 / delta_trunc);
    const double lambda_eff = intensity * law.band_probability();
    const double comp = lambda_eff * law.mean();
    m.jumps = JumpSourceSpec{lambda_eff, law};
    m.jump_coeff = [](double, const Vec& x, double y) {
      Vec v = Vec::Zero(2);
      v(0) = y * x(0);
      return v;
    };
    m.jump_jacobian = [](double, const Vec&, double y) {
      Mat j = zero_mat(2, 2);
      j(0, 0) = y;
      return j;
    };
    m.jump_compensator = [comp](double, const Vec& x) {
      Vec v = Vec::Zero(2);
      v(0) = comp * x(0);
      return v;
    };
    m.jump_compensator_jacobian = [comp](double, const Vec&) {
      Mat j = zero_mat(2, 2);
      j(0, 0) = comp;
      return j;
    };
  }
  m.spot_coord = SpotCoordinate::level;
  m.spot0 = spot;
  m.initial_state_for_spot = [](double s) {
    Vec z = Vec::Zero(2);
    z(0) = s;
    return z;
  };
  set_state_observation_2d(m);
  m.families = {WeightFamily::hypoelliptic};
  m.aux = AuxFamily::exp_levy_asian;
  m.levy_sigma = sigma;
  const double s2 = sigma * sigma;
  const double s0 = spot;
  m.cov_h_derivatives = [s2, s0](const SimulatedPath& p) {
    const auto& a = p.levy_aux;
    Mat dc1 = Mat::Zero(2, 2), dc2 = Mat::Zero(2, 2);
    dc1(0, 1) = dc1(1, 0) = -s2 * s0 * a.int_dh1_a;
    dc1(1, 1) = s2 * a.int_dh1_a2;
    dc2(0, 1) = dc2(1, 0) = -s2 * s0 * a.int_dh2_a;
    dc2(1, 1) = s2 * a.int_dh2_a2;
    return std::vector<Mat>{dc1, dc2};
  };
  return m;
}

namespace {

ModelSpec make_heston_jump(const SvjParams& p, const TruncationLevel& trunc,
                           bool volatility_jumps) {
  p.validate();
  trunc.validate(p.feller_delta());

  ModelSpec m;
  m.name = volatility_jumps ? "svjj" : "svj";
  m.dim = 2;
  m.brownian_dim = 2;
  m.z0 = Vec::Zero(2);
  m.z0(0) = std::log(p.spot);
  m.z0(1) = std::sqrt(p.sigma0_sq);

  const SvjTruncation tf(double(trunc.n), trunc.floor(p.feller_delta()),
                         0.5 * p.kappa * p.theta - 0.125 * p.eta * p.eta);
  const double r = p.r;
  const double kappa = p.kappa;
  const double rho = p.rho;
  const double orth = std::sqrt(1.0 - rho * rho);
  const double half_eta = 0.5 * p.eta;
  const double lambda = p.lambda;
  const double gv = p.gamma_v;

  m.drift = [=](double, const Vec& x) {
    const double s = x(1);
    Vec z(2);
    z(0) = r - tf.h(s);
    z(1) = tf.g(s) - 0.5 * kappa * s;
    if (volatility_jumps) z(1) += lambda * (std::sqrt(s * s + gv) - s);
    return z;
  };
  m.drift_jacobian = [=](double, const Vec& x) {
    const double s = x(1);
    Mat j = zero_mat(2, 2);
    j(0, 1) = -tf.h_prime(s);
    j(1, 1) = tf.g_prime(s) - 0.5 * kappa;
    if (volatility_jumps) j(1, 1) += lambda * (s / std::sqrt(s * s + gv) - 1.0);
    return j;
  };
  m.diffusion = [=](double, const Vec& x) {
    const double ps = tf.p(x(1));
    Mat d(2, 2);
    d(0, 0) = orth * ps;
    d(0, 1) = rho * ps;
    d(1, 0) = 0.0;
    d(1, 1) = half_eta;
    return d;
  };
  m.diffusion_col_jacobian = [=](double, const Vec& x, int col) {
    const double dp = tf.p_prime(x(1));
    Mat j = zero_mat(2, 2);
    j(0, 1) = (col == 0 ? orth : rho) * dp;
    return j;
  };

  if (lambda > 0.0) {
    m.jumps = JumpSourceSpec{lambda, MarkLaw::normal(p.jump_mean, p.jump_sd)};
    const double jm = p.jump_mean;
    if (volatility_jumps) {
      m.jump_coeff = [gv](double, const Vec& x, double y) {
        const double s = x(1);
        Vec v(2);
        v(0) = y;
        v(1) = std::sqrt(s * s + gv) - s;
        return v;
      };
      m.jump_jacobian = [gv](double, const Vec& x, double) {
        const double s = x(1);
        Mat j = zero_mat(2, 2);
        j(1, 1) = s / std::sqrt(s * s + gv) - 1.0;
        return j;
      };
      m.jump_compensator = [lambda, jm, gv](double, const Vec& x) {
        const double s = x(1);
        Vec v(2);
        v(0) = lambda * jm;
        v(1) = lambda * (std::sqrt(s * s + gv) - s);
        return v;
      };
      m.jump_compensator_jacobian = [lambda, gv](double, const Vec& x) {
        const double s = x(1);
        Mat j = zero_mat(2, 2);
        j(1, 1) = lambda * (s / std::sqrt(s * s + gv) - 1.0);
        return j;
      };
    } else {
      m.jump_coeff = [](double, const Vec&, double y) {
        Vec v = Vec::Zero(2);
        v(0) = y;
        return v;
      };
      m.jump_jacobian = [](double, const Vec&, double) { return zero_mat(2, 2); };
      m.jump_compensator = [lambda, jm](double, const Vec&) {
        Vec v = Vec::Zero(2);
        v(0) = lambda * jm;
        return v;
      };
      m.jump_compensator_jacobian = [](double, const Vec&) { return zero_mat(2, 2); };
    }
  }

  m.spot_coord = SpotCoordinate::log_price;
  m.spot0 = p.spot;
  const double sigma0 = std::sqrt(p.sigma0_sq);
  m.initial_state_for_spot = [sigma0](double s) {
    Vec z(2);
    z(0) = std::log(s);
    z(1) = sigma0;
    return z;
  };
  m.observe = [](const Vec& x) { return Vec::Constant(1, std::exp(x(0))); };
  m.observe_jacobian = [](const Vec& x) {
    Mat j = zero_mat(1, 2);
    j(0, 0) = std::exp(x(0));
    return j;
  };
  m.observed_dim = 1;

  // X X^T >= det/trace evaluated at the p-floor lower bound floor/2.
  const double q = 0.5 * tf.floor_p;
  const double e2 = half_eta * half_eta;
  m.ellipticity = (1.0 - rho * rho) * e2 * q * q / (q * q + e2);

  m.families = {volatility_jumps ? WeightFamily::svjj_delta : WeightFamily::svj_delta,
                WeightFamily::svj_gamma, WeightFamily::bel_delta,
                WeightFamily::bel_gamma};
  m.class_j_weights_ok = true;
  return m;
}

}  // namespace

ModelSpec make_svj(const SvjParams& p, const TruncationLevel& trunc) {
  if (p.gamma_v != 0.0)
    throw std::invalid_argument("SVJ does not take a variance jump size; use SVJJ");
  return make_heston_jump(p, trunc, false);
}

ModelSpec make_svjj(const SvjParams& p, const TruncationLevel& trunc) {
  return make_heston_jump(p, trunc, true);
}

}  // namespace jdg
