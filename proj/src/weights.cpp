#include <jdg/weights.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace jdg {

namespace {

[[noreturn]] void weight_fail(const char* what, int node, double t) {
  throw WeightError(std::string(what) + " at node " + std::to_string(node) +
                    " (t=" + std::to_string(t) + ")");
}

Mat right_inverse_at(const ModelSpec& model, double t, const Vec& x, int node) {
  Mat r;
  if (!right_inverse(model.diffusion(t, x), r))
    weight_fail("diffusion matrix has no right inverse (X X^T singular)", node, t);
  return r;
}

// Directional derivative of R = X^T (X X^T)^{-1} along the state direction u:
//   dR = dX^T G - X^T G (dX X^T + X dX^T) G,  G = (X X^T)^{-1},
// with dX the column-wise contraction of grad X against u.
Mat grad_right_inverse_dir(const ModelSpec& model, double t, const Vec& x,
                           const Vec& u, int node) {
  const Mat xm = model.diffusion(t, x);
  Mat dx(model.dim, model.brownian_dim);
  for (int l = 0; l < model.brownian_dim; ++l)
    dx.col(l) = model.diffusion_col_jacobian(t, x, l) * u;
  const Mat a = xm * xm.transpose();
  Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible())
    weight_fail("diffusion matrix has no right inverse (X X^T singular)", node, t);
  const Mat g = lu.inverse();
  return dx.transpose() * g -
         xm.transpose() * g * (dx * xm.transpose() + xm * dx.transpose()) * g;
}

int require_node(const SimulatedPath& path, double t, const char* what) {
  const auto it = std::lower_bound(path.times.begin(), path.times.end(), t - 1e-12);
  if (it == path.times.end() || std::fabs(*it - t) > 1e-9)
    throw WeightError(std::string(what) + " requires t=" + std::to_string(t) +
                      " on the grid");
  return int(it - path.times.begin());
}

}  // namespace

TemperingFunction TemperingFunction::uniform(const TimeGrid& grid, double t1) {
  if (!(t1 > 0.0) || t1 > grid.horizon)
    throw WeightError("tempering horizon must lie in (0, T]");
  TemperingFunction a;
  a.breaks_ = grid.nodes;
  a.values_.assign(grid.nodes.size() - 1, 0.0);
  a.t1_ = t1;
  bool hit = false;
  for (std::size_t i = 0; i + 1 < grid.nodes.size(); ++i) {
    if (grid.nodes[i] < t1) a.values_[i] = 1.0 / t1;
    if (grid.nodes[i + 1] == t1) hit = true;
  }
  if (t1 == grid.horizon) hit = true;
  if (!hit) throw WeightError("tempering horizon t1 must be a grid node");
  return a;
}

TemperingFunction TemperingFunction::with_net_zero_tail(const TimeGrid& grid,
                                                        double t1, double amp) {
  TemperingFunction a = uniform(grid, t1);
  if (t1 >= grid.horizon) return a;
  const double mid = 0.5 * (t1 + grid.horizon);
  bool mid_on_grid = false;
  for (std::size_t i = 0; i + 1 < grid.nodes.size(); ++i) {
    const double lo = grid.nodes[i];
    if (lo == mid) mid_on_grid = true;
    if (lo >= t1) a.values_[i] = lo < mid ? amp : -amp;
  }
  if (!mid_on_grid)
    throw WeightError("net-zero tail needs (t1+T)/2 on the grid");
  return a;
}

double TemperingFunction::at(double t) const {
  if (t < breaks_.front() || t >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
  return values_[std::size_t(it - breaks_.begin()) - 1];
}

double TemperingFunction::integral_to(double t) const {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (breaks_[i] >= t) break;
    acc += values_[i] * (std::min(t, breaks_[i + 1]) - breaks_[i]);
  }
  return acc;
}

MalliavinWeight bel_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                 const TemperingFunction& a, int k) {
  if (path.u.empty()) throw WeightError("delta weight requires the first variation");
  double acc = 0.0;
  const int m = model.brownian_dim;
  for (int i = 0; i + 1 < path.nodes(); ++i) {
    const double t = path.times[std::size_t(i)];
    const double av = a.at(t);
    if (av == 0.0) continue;
    const Mat r = right_inverse_at(model, t, path.x[std::size_t(i)], i);
    const Vec integrand = r * (path.u[std::size_t(i)].col(k));
    double dot = 0.0;
    for (int l = 0; l < m; ++l) dot += integrand(l) * path.noise->increment(i, l);
    acc += av * dot;
  }
  return {acc, WeightFamily::bel_delta, k, 0};
}

MalliavinWeight bel_gamma_weight(const SimulatedPath& path, const ModelSpec& model,
                                 int j, int k, double t1) {
  if (path.u.empty()) throw WeightError("gamma weight requires the first variation");
  if (path.variation_order < 2)
    throw WeightError("gamma weight requires the second variation");
  const double half = 0.5 * t1;
  require_node(path, half, "gamma weight");
  require_node(path, t1, "gamma weight");

  const int m = model.brownian_dim;
  double early = 0.0, late = 0.0, grad_r_term = 0.0, second_var_term = 0.0;
  for (int i = 0; i + 1 < path.nodes(); ++i) {
    const double t = path.times[std::size_t(i)];
    if (t >= t1) break;
    const Vec& x = path.x[std::size_t(i)];
    const Mat& u = path.u[std::size_t(i)];
    const Mat r = right_inverse_at(model, t, x, i);
    if (t < half) {
      const Vec ik = r * u.col(k);
      const Mat dr = grad_right_inverse_dir(model, t, x, u.col(j), i);
      const Vec igr = dr * u.col(k);
      const Vec ip2 = r * path.second_variation(i, j, k);
      for (int l = 0; l < m; ++l) {
        const double dw = path.noise->increment(i, l);
        early += ik(l) * dw;
        grad_r_term += igr(l) * dw;
        second_var_term += ip2(l) * dw;
      }
    } else {
      const Vec ij = r * u.col(j);
      for (int l = 0; l < m; ++l) late += ij(l) * path.noise->increment(i, l);
    }
  }
  const double value = (4.0 / (t1 * t1)) * late * early +
                       (2.0 / t1) * (grad_r_term + second_var_term);
  MalliavinWeight w{value, WeightFamily::bel_gamma, k, j};
  return w;
}

MalliavinWeight hypoelliptic_weight(const SimulatedPath& path,
                                    const ModelSpec& model, int j) {
  if (!path.has_v)
    throw WeightError("hypoelliptic weight requires V and int V X dW on the path");
  const int d = model.dim;
  const Mat c = malliavin_covariance(path, model);
  const double det = c.determinant();
  const double scale = c.trace() / double(d);
  if (!(det > 1e-12 * std::pow(scale, d)))
    throw DegenerateCovariance("Malliavin covariance numerically degenerate (det " +
                               std::to_string(det) + ")");
  const Mat cinv = c.inverse();
  double value = path.ito_vx_dw.dot(cinv.col(j));
  if (model.cov_h_derivatives) {
    const std::vector<Mat> dcs = model.cov_h_derivatives(path);
    for (int k = 0; k < int(dcs.size()); ++k)
      value += (cinv * dcs[std::size_t(k)] * cinv)(k, j);
  }
  return {value, WeightFamily::hypoelliptic, j, 0};
}

namespace {

MalliavinWeight svj_weight_impl(const SimulatedPath& path, const ModelSpec& model,
                                double t1, WeightFamily tag) {
  require_node(path, t1, "SVJ weight");
  double acc = 0.0;
  for (int i = 0; i + 1 < path.nodes(); ++i) {
    const double t = path.times[std::size_t(i)];
    if (t >= t1) break;
    // left column of the diffusion row for log-S is sqrt(1-rho^2) p(sigma_-)
    const double coeff = model.diffusion(t, path.x[std::size_t(i)])(0, 0);
    acc += path.noise->increment(i, 0) / coeff;
  }
  return {acc / (t1 * model.spot0), tag, 0, 0};
}

}  // namespace

MalliavinWeight svj_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                 double t1) {
  return svj_weight_impl(path, model, t1, WeightFamily::svj_delta);
}

MalliavinWeight svjj_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                  double t1) {
  return svj_weight_impl(path, model, t1, WeightFamily::svjj_delta);
}

double exp_levy_asian_weight_closed_form(const SimulatedPath& path,
                                         const ModelSpec& model) {
  const auto& a = path.levy_aux;
  const double sigma = model.levy_sigma;
  const double s0 = model.spot0;
  const double t_end = path.grid->horizon;
  const double denom = t_end * a.int_a2 - a.int_a * a.int_a;
  const double pi1 = (a.w_terminal * a.int_a2 - a.int_a_dw * a.int_a) /
                     (sigma * s0 * denom);
  const double s6 = std::pow(sigma, 6.0);
  const double det2 = a.det_c * a.det_c;
  const double pi21 = s0 * s0 * s6 / det2 *
                      (-2.0 * a.int_a2 * a.int_a * a.int_dh1_a +
                       a.int_a * a.int_a * a.int_dh1_a2);
  const double pi22 = s0 * s0 * s0 * s6 / det2 *
                      (-a.int_a * a.int_a * a.int_dh2_a +
                       t_end * (a.int_a * a.int_dh2_a2 - a.int_a2 * a.int_dh2_a));
  return pi1 + pi21 + pi22;
}

double spot_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                         WeightFamily family, const TemperingFunction& a) {
  switch (family) {
    case WeightFamily::bel_delta: {
      const double w = bel_delta_weight(path, model, a, 0).value;
      return model.spot_coord == SpotCoordinate::level ? w : w / model.spot0;
    }
    case WeightFamily::svj_delta:
      return svj_delta_weight(path, model, a.t1()).value;
    case WeightFamily::svjj_delta:
      return svjj_delta_weight(path, model, a.t1()).value;
    case WeightFamily::hypoelliptic: {
      if (model.spot_coord != SpotCoordinate::level)
        throw WeightError("hypoelliptic weight is wired for level-coordinate models");
      return hypoelliptic_weight(path, model, 0).value;
    }
    default:
      throw WeightError("not a delta weight family");
  }
}

double spot_gamma_weight(const SimulatedPath& path, const ModelSpec& model,
                         WeightFamily family, double t1,
                         const TemperingFunction& a) {
  if (family != WeightFamily::bel_gamma && family != WeightFamily::svj_gamma)
    throw WeightError("not a gamma weight family");
  const double gamma_z = bel_gamma_weight(path, model, 0, 0, t1).value;
  if (model.spot_coord == SpotCoordinate::level) return gamma_z;
  // log coordinates: d^2/dx^2 = S0 d/dS0 + S0^2 d^2/dS0^2
  const double delta_z = bel_delta_weight(path, model, a, 0).value;
  return (gamma_z - delta_z) / (model.spot0 * model.spot0);
}

}  // namespace jdg
