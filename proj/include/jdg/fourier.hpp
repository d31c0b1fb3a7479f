#pragma once

#include <jdg/model.hpp>
#include <jdg/oracles.hpp>

namespace jdg {

// Semi-closed-form European call benchmark for the SVJ model: Heston
// characteristic function times the compound-Poisson jump factor, with the
// drift matching this engine's log-space jump compensation. Undiscounted
// price and spot delta by Gil-Pelaez quadrature; the declared accuracy comes
// from quadrature refinement.
struct FourierResult {
  OracleValue price;
  OracleValue delta;
  double expected_spot = 0.0;  // E[S_T] under the model
};

FourierResult fourier_svj_call(const SvjParams& params, double strike, double expiry);

// Undiscounted put via the same transform (parity checks).
double fourier_svj_put_price(const SvjParams& params, double strike, double expiry);

}  // namespace jdg
