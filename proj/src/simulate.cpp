#include <jdg/simulate.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace jdg {

namespace {

[[noreturn]] void fail_at(const char* what, int node, double t) {
  throw PathError(std::string(what) + " at node " + std::to_string(node) +
                  " (t=" + std::to_string(t) + ")");
}

Mat inverse_checked(const Mat& u, int node, double t) {
  const double det = u.determinant();
  if (!std::isfinite(det) || det == 0.0)
    fail_at("singular first variation", node, t);
  return u.inverse();
}

}  // namespace

void simulate_path(const ModelSpec& model, const TimeGrid& grid,
                   const NoiseBundle& noise, int variation_order,
                   SimulatedPath& out) {
  const int d = model.dim;
  const int m = model.brownian_dim;
  const int n_nodes = int(noise.times.size());
  const bool want_u = variation_order >= 1;
  const bool want_u2 = variation_order >= 2;
  const bool want_v = want_u && model.has_family(WeightFamily::hypoelliptic);
  const bool levy = model.aux == AuxFamily::exp_levy_asian;

  out.dim = d;
  out.variation_order = variation_order;
  out.has_v = want_v;
  out.times = noise.times;
  out.x.resize(n_nodes);
  out.x_pre.resize(n_nodes);
  out.u.resize(want_u ? n_nodes : 0);
  out.u_pre.resize(want_u ? n_nodes : 0);
  out.u2.resize(want_u2 ? std::size_t(n_nodes) * d * d : 0);
  out.levy_aux = {};
  out.noise = &noise;
  out.grid = &grid;
  out.model = &model;

  Vec x = model.z0;
  Mat u = want_u ? identity(d) : Mat();
  std::array<Vec, std::size_t(kMaxDim) * kMaxDim> p2;
  if (want_u2)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) p2[std::size_t(j) * d + k] = Vec::Zero(d);

  Vec ito = Vec::Zero(d);
  auto& aux = out.levy_aux;
  const double lsig2 = model.levy_sigma * model.levy_sigma;
  const double s0 = model.spot0;

  out.x[0] = x;
  out.x_pre[0] = x;
  if (want_u) {
    out.u[0] = u;
    out.u_pre[0] = u;
  }
  if (want_u2)
    for (int j = 0; j < d * d; ++j) out.u2[std::size_t(j)] = p2[std::size_t(j)];

  Vec dwv(m);
  std::array<Mat, kMaxDim> col_jac;

  for (int i = 0; i + 1 < n_nodes; ++i) {
    const double t = noise.times[i];
    const double dt = noise.times[i + 1] - t;
    for (int j = 0; j < m; ++j) dwv(j) = noise.increment(i, j);

    const Mat xmat = model.diffusion(t, x);
    Vec drift = model.drift(t, x);
    if (model.jumps) drift -= model.jump_compensator(t, x);

    if (levy) {
      // Adapted left-point accumulation; outer integrands read the inner
      // integrals before they advance over this interval.
      const double s_now = x(0), a_now = x(1);
      const double dh1 = lsig2 * s0 * aux.int_ts;
      const double dh2 = lsig2 * (aux.int_a2 - a_now * aux.int_a);
      aux.int_dh1_a += dh1 * dt;
      aux.int_dh2_a += dh2 * dt;
      aux.int_dh1_a2 += 2.0 * a_now * dh1 * dt;
      aux.int_dh2_a2 += 2.0 * a_now * dh2 * dt;
      aux.int_a_dw += a_now * dwv(0);
      aux.w_terminal += dwv(0);
      aux.int_ts += t * s_now * dt;
      aux.int_a += a_now * dt;
      aux.int_a2 += a_now * a_now * dt;
    }
    if (want_v) ito += inverse_checked(u, i, t) * (xmat * dwv);

    const Vec x_next = x + drift * dt + xmat * dwv;

    if (want_u) {
      Mat a = model.drift_jacobian(t, x);
      if (model.jumps) a -= model.jump_compensator_jacobian(t, x);
      Mat step = identity(d) + a * dt;
      for (int l = 0; l < m; ++l) {
        col_jac[std::size_t(l)] = model.diffusion_col_jacobian(t, x, l);
        step += col_jac[std::size_t(l)] * dwv(l);
      }
      if (want_u2) {
        for (int j = 0; j < d; ++j) {
          for (int k = 0; k < d; ++k) {
            Vec& p = p2[std::size_t(j) * d + k];
            Vec np = p + (a * p) * dt;
            for (int l = 0; l < m; ++l) np += (col_jac[std::size_t(l)] * p) * dwv(l);
            if (model.drift_hessian)
              np += model.drift_hessian(t, x, u.col(j), u.col(k)) * dt;
            if (model.diffusion_col_hessian)
              for (int l = 0; l < m; ++l)
                np += model.diffusion_col_hessian(t, x, u.col(j), u.col(k), l) * dwv(l);
            p = np;
          }
        }
      }
      u = step * u;
    }
    x = x_next;

    const int node = i + 1;
    out.x_pre[std::size_t(node)] = x;
    if (want_u) out.u_pre[std::size_t(node)] = u;

    const std::int32_t jidx = noise.jump_at[std::size_t(node)];
    if (jidx >= 0) {
      const double tau = noise.times[std::size_t(node)];
      const double y = noise.jumps[std::size_t(jidx)].mark;
      const Vec dx = model.jump_coeff(tau, x, y);
      if (want_u) {
        const Mat jy = model.jump_jacobian(tau, x, y);
        if (want_u2) {
          for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
              Vec& p = p2[std::size_t(j) * d + k];
              Vec np = p + jy * p;
              if (model.jump_hessian)
                np += model.jump_hessian(tau, x, y, u.col(j), u.col(k));
              p = np;
            }
          }
        }
        u += jy * u;
      }
      x += dx;
    }
    if (!x.allFinite()) fail_at("non-finite state", node, noise.times[std::size_t(node)]);

    out.x[std::size_t(node)] = x;
    if (want_u) out.u[std::size_t(node)] = u;
    if (want_u2)
      for (int j = 0; j < d * d; ++j)
        out.u2[std::size_t(node) * d * d + j] = p2[std::size_t(j)];
  }

  out.ito_vx_dw = ito;
  if (levy) {
    const double t_end = grid.horizon;
    aux.det_c = lsig2 * lsig2 * s0 * s0 *
                (t_end * aux.int_a2 - aux.int_a * aux.int_a);
  }

  out.obs_node.clear();
  out.obs_node.reserve(grid.mandatory.size());
  for (double tm : grid.mandatory) {
    const auto it = std::lower_bound(grid.nodes.begin(), grid.nodes.end(), tm);
    if (it == grid.nodes.end() || *it != tm)
      throw PathError("mandatory date is not a grid node");
    const int base = int(it - grid.nodes.begin());
    out.obs_node.push_back(noise.base_node[std::size_t(base)]);
  }
}

SimulatedPath simulate_path(const ModelSpec& model, const TimeGrid& grid,
                            const NoiseBundle& noise, int variation_order) {
  SimulatedPath p;
  simulate_path(model, grid, noise, variation_order, p);
  return p;
}

Mat malliavin_covariance(const SimulatedPath& path, const ModelSpec& model) {
  const int d = model.dim;
  if (path.u.empty()) throw PathError("covariance needs the first variation");
  Mat c = Mat::Zero(d, d);
  for (int i = 0; i + 1 < path.nodes(); ++i) {
    const double dt = path.times[std::size_t(i) + 1] - path.times[std::size_t(i)];
    const Mat v = inverse_checked(path.u[std::size_t(i)], i, path.times[std::size_t(i)]);
    const Mat vx = v * model.diffusion(path.times[std::size_t(i)], path.x[std::size_t(i)]);
    c += (vx * vx.transpose()) * dt;
  }
  return c;
}

bool verify_ellipticity(const SimulatedPath& path, const ModelSpec& model) {
  if (model.ellipticity <= 0.0) return true;
  for (int i = 0; i < path.nodes(); ++i) {
    const Mat xm = model.diffusion(path.times[std::size_t(i)], path.x[std::size_t(i)]);
    if (min_eigenvalue_sym(xm * xm.transpose()) < model.ellipticity * (1.0 - 1e-12))
      return false;
  }
  return true;
}

}  // namespace jdg
