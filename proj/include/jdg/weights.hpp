#pragma once

#include <jdg/simulate.hpp>

namespace jdg {

struct WeightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when det C_T falls under the conditioning tolerance; the estimator
// counts the path as rejected.
struct DegenerateCovariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic tempering a(t), piecewise constant on the base grid, with
// unit integral over [0, t1]. The minimal-variance choice vanishes after t1;
// the comparison constructor adds a nonzero net-zero tail.
class TemperingFunction {
 public:
  // a = 1/t1 on [0, t1), 0 after.
  static TemperingFunction uniform(const TimeGrid& grid, double t1);
  // Same unit mass on [0, t1) plus +amp on the first half of [t1, T) and
  // -amp on the second half, so the cumulative integral returns to 1 at T.
  static TemperingFunction with_net_zero_tail(const TimeGrid& grid, double t1,
                                              double amp);

  double at(double t) const;
  double integral_to(double t) const;
  double t1() const { return t1_; }

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
  double t1_ = 0.0;
};

struct MalliavinWeight {
  double value = 0.0;
  WeightFamily family = WeightFamily::bel_delta;
  int k = 0;  // target coordinate
  int j = 0;  // second coordinate (gamma)
};

// Theorem-2 weight: left-point Ito sum of a(t) (R(t,x_{t-}) U_{t-} e_k)^T dW.
MalliavinWeight bel_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                 const TemperingFunction& a, int k);

// Theorem-3 three-term weight on [0, t1] (t1/2 must be a grid node):
//   (4/t1^2) I2 I1 + (2/t1) [ int (grad R . dx_j dx_k)^T dW
//                           + int (R d2x/dz_j dz_k)^T dW ]
MalliavinWeight bel_gamma_weight(const SimulatedPath& path, const ModelSpec& model,
                                 int j, int k, double t1);

// Theorem-4 weight: (int V X dW)^T C^{-1} e_j + sum_k (C^{-1} dC_k C^{-1})_{k,j}.
MalliavinWeight hypoelliptic_weight(const SimulatedPath& path,
                                    const ModelSpec& model, int j);

// Theorem-5/6 spot weight int_0^{t1} dZ / (t1 S0 sqrt(1-rho^2) p(sigma_{s-}))
// read directly off the simulated diffusion matrix.
MalliavinWeight svj_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                 double t1);
MalliavinWeight svjj_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                                  double t1);

// Example-2 closed-form assembly pi = pi1 + pi21 + pi22 from the auxiliary
// integrals; algebraically identical to the generic Theorem-4 weight.
double exp_levy_asian_weight_closed_form(const SimulatedPath& path,
                                         const ModelSpec& model);

// Per-path spot-sensitivity weights with the coordinate chain rule applied
// (d/dS0 = (1/S0) d/dx for log models; gamma uses the operator identity
// S0 d/dS0 + S0^2 d^2/dS0^2 = d^2/dx^2).
double spot_delta_weight(const SimulatedPath& path, const ModelSpec& model,
                         WeightFamily family, const TemperingFunction& a);
double spot_gamma_weight(const SimulatedPath& path, const ModelSpec& model,
                         WeightFamily family, double t1,
                         const TemperingFunction& a);

}  // namespace jdg
