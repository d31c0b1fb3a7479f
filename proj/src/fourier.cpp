#include <jdg/fourier.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace jdg {

namespace {

using cd = std::complex<double>;

// E[exp(i u (X_T - x))] for the SVJ log-stock: Heston volatility part in the
// stable ("little trap") parameterisation times the compound-Poisson factor,
// with the drift carrying this engine's log-space jump compensation
// r - lambda * jump_mean.
struct SvjCharFn {
  SvjParams p;
  double expiry;

  cd operator()(cd u) const {
    const cd i(0.0, 1.0);
    const double eta2 = p.eta * p.eta;
    const cd alpha = -0.5 * u * u - 0.5 * i * u;
    const cd beta = p.kappa - p.rho * p.eta * i * u;
    const double gamma = 0.5 * eta2;
    const cd d = std::sqrt(beta * beta - 4.0 * alpha * gamma);
    const cd r_minus = (beta - d) / eta2;
    const cd r_plus = (beta + d) / eta2;
    const cd g = r_minus / r_plus;
    const cd e = std::exp(-d * expiry);
    const cd big_d = r_minus * (1.0 - e) / (1.0 - g * e);
    const cd big_c =
        p.kappa * (r_minus * expiry - (2.0 / eta2) * std::log((1.0 - g * e) / (1.0 - g)));
    cd jump(0.0, 0.0);
    if (p.lambda > 0.0)
      jump = p.lambda * expiry *
             (std::exp(i * u * p.jump_mean - 0.5 * u * u * p.jump_sd * p.jump_sd) - 1.0);
    const cd drift = i * u * ((p.r - p.lambda * p.jump_mean) * expiry);
    return std::exp(drift + big_c * p.theta + big_d * p.sigma0_sq + jump);
  }
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  return adaptive_simpson(f, a, b, f(a), f(m), f(b), tol, 36);
}

// Gil-Pelaez probability 1/2 + (1/pi) int Re(e^{-iuk} phi(u) / (iu)) du, with
// the upper limit grown until the integrand is negligible.
double gil_pelaez(const std::function<cd(double)>& phi, double k, double tol,
                  double* truncation_err) {
  const auto integrand = [&](double u) {
    const cd i(0.0, 1.0);
    return std::real(std::exp(-i * u * k) * phi(u) / (i * u));
  };
  double upper = 100.0;
  while (upper < 25600.0 && std::abs(phi(upper)) / upper > 1e-14) upper *= 2.0;
  if (truncation_err) *truncation_err = std::abs(phi(upper)) / upper * upper * 0.1;
  const double integral = integrate(integrand, 1e-10, upper, tol);
  return 0.5 + integral / M_PI;
}

struct SvjTransformParts {
  double pi1 = 0.0;
  double pi2 = 0.0;
  double expected_spot = 0.0;
  double err = 0.0;
};

SvjTransformParts svj_parts(const SvjParams& p, double strike, double expiry,
                            double tol) {
  p.validate();
  if (!(strike > 0.0) || !(expiry > 0.0))
    throw std::invalid_argument("Fourier oracle needs positive strike and expiry");
  const SvjCharFn cf{p, expiry};
  const cd minus_i(0.0, -1.0);
  const double mgf1 = std::real(cf(minus_i));  // E[S_T] / S_0
  const double k = std::log(strike / p.spot);

  SvjTransformParts parts;
  parts.expected_spot = p.spot * mgf1;
  double err1 = 0.0, err2 = 0.0;
  parts.pi2 = gil_pelaez([&](double u) { return cf(cd(u, 0.0)); }, k, tol, &err2);
  parts.pi1 = gil_pelaez(
      [&](double u) { return cf(cd(u, -1.0)) / mgf1; }, k, tol, &err1);
  parts.err = err1 + err2;
  return parts;
}

}  // namespace

FourierResult fourier_svj_call(const SvjParams& params, double strike, double expiry) {
  const double tol = 1e-10;
  const SvjTransformParts coarse = svj_parts(params, strike, expiry, tol * 16.0);
  const SvjTransformParts fine = svj_parts(params, strike, expiry, tol);

  FourierResult out;
  out.expected_spot = fine.expected_spot;
  const double price = fine.expected_spot * fine.pi1 - strike * fine.pi2;
  const double price_coarse =
      coarse.expected_spot * coarse.pi1 - strike * coarse.pi2;
  const double delta = fine.expected_spot / params.spot * fine.pi1;
  const double delta_coarse =
      coarse.expected_spot / params.spot * coarse.pi1;

  const double price_acc =
      std::fabs(price - price_coarse) + fine.err * (fine.expected_spot + strike);
  const double delta_acc =
      std::fabs(delta - delta_coarse) + fine.err * 2.0 * fine.expected_spot / params.spot;
  out.price = {price, std::max(price_acc, 1e-10), "fourier-gil-pelaez"};
  out.delta = {delta, std::max(delta_acc, 1e-10), "fourier-gil-pelaez"};
  return out;
}

double fourier_svj_put_price(const SvjParams& params, double strike, double expiry) {
  const SvjTransformParts parts = svj_parts(params, strike, expiry, 1e-10);
  return strike * (1.0 - parts.pi2) - parts.expected_spot * (1.0 - parts.pi1);
}

}  // namespace jdg
