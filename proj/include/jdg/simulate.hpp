#pragma once

#include <stdexcept>
#include <vector>

#include <jdg/model.hpp>

namespace jdg {

struct PathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Running integrals for the exponential-Levy Asian weight: the Malliavin
// covariance entries and the perturbation derivatives of the average,
// all accumulated with the adapted left-point convention.
struct ExpLevyAsianAux {
  double int_a = 0.0;      // int A dt
  double int_a2 = 0.0;     // int A^2 dt
  double int_a_dw = 0.0;   // int A dW
  double w_terminal = 0.0;
  double int_dh1_a = 0.0;   // int (d/dh1 A_t) dt
  double int_dh2_a = 0.0;   // int (d/dh2 A_t) dt
  double int_dh1_a2 = 0.0;  // int (d/dh1 A_t^2) dt
  double int_dh2_a2 = 0.0;  // int (d/dh2 A_t^2) dt
  double int_ts = 0.0;      // inner int s S_{s-} ds
  double det_c = 0.0;       // filled after integration
};

// One simulated trajectory on the jump-adapted timeline: post-jump state and
// first variation per node, left limits at jump nodes, optional second
// variation, and the Ito integral int V X dW when the model carries the
// hypoelliptic family.
struct SimulatedPath {
  int dim = 0;
  int variation_order = 0;
  bool has_v = false;

  std::vector<double> times;
  std::vector<Vec> x;      // post-jump values
  std::vector<Mat> u;      // first variation (order >= 1)
  std::vector<Vec> x_pre;  // left limits; equals x away from jumps
  std::vector<Mat> u_pre;
  std::vector<Vec> u2;     // second variation, nodes x (d*d), (j*d+k)

  Vec ito_vx_dw;
  ExpLevyAsianAux levy_aux;

  std::vector<int> obs_node;  // refined node per grid mandatory date

  const NoiseBundle* noise = nullptr;
  const TimeGrid* grid = nullptr;
  const ModelSpec* model = nullptr;

  int nodes() const { return int(times.size()); }
  const Vec& second_variation(int node, int j, int k) const {
    return u2[std::size_t(node) * dim * dim + std::size_t(j) * dim + k];
  }
  bool is_jump_node(int node) const {
    return noise && noise->jump_at[node] >= 0;
  }
};

// Jump-adapted Euler-Maruyama with left-point coefficients; variation
// processes are the exact derivatives of the discrete scheme.
void simulate_path(const ModelSpec& model, const TimeGrid& grid,
                   const NoiseBundle& noise, int variation_order,
                   SimulatedPath& out);

SimulatedPath simulate_path(const ModelSpec& model, const TimeGrid& grid,
                            const NoiseBundle& noise, int variation_order);

// Left-point Riemann sum of (V X)(V X)^T over the path's timeline.
Mat malliavin_covariance(const SimulatedPath& path, const ModelSpec& model);

// Ellipticity spot check: smallest eigenvalue of X X^T against the model's
// declared floor at every node.
bool verify_ellipticity(const SimulatedPath& path, const ModelSpec& model);

}  // namespace jdg
