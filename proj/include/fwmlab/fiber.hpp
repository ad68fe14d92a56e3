#pragma once

#include <cmath>

#include "fwmlab/common.hpp"
#include "fwmlab/wavelength.hpp"

namespace fwmlab {

/// Highly nonlinear fiber, SI units throughout.
struct FiberSpec {
  double length = 450.0;                                // m
  double zdw = 1545.0 * units::nm;                      // m
  double dispersion_slope = 0.018 * units::ps_per_km_nm2;  // s/m^3
  double gamma = 10.0 * units::per_w_km;                // 1/(W m)
  double loss_db_per_km = 0.0;
  double raman_fraction = 0.245;

  void validate() const {
    if (!(length > 0.0)) throw DomainError("fiber length must be positive");
    if (!(zdw > 0.0)) throw DomainError("zero-dispersion wavelength must be positive");
    if (!std::isfinite(dispersion_slope)) throw DomainError("dispersion slope must be finite");
    if (!(gamma >= 0.0)) throw DomainError("nonlinear coefficient must be non-negative");
    if (!(loss_db_per_km >= 0.0)) throw DomainError("fiber loss must be non-negative");
    if (!(raman_fraction >= 0.0 && raman_fraction < 1.0)) throw DomainError("Raman fraction must lie in [0, 1)");
  }

  /// Power attenuation coefficient in 1/m.
  double alpha() const { return loss_db_per_km * std::log(10.0) / 10.0 / 1000.0; }

  /// L when lossless, (1 - exp(-alpha L)) / alpha otherwise.
  double effective_length() const {
    const double a = alpha();
    if (a == 0.0) return length;
    return -std::expm1(-a * length) / a;
  }
};

struct Dispersion {
  double d;      // s/m^2
  double beta2;  // s^2/m
};

inline constexpr double dispersion_window_min = 1.4e-6;
inline constexpr double dispersion_window_max = 1.7e-6;

inline void check_dispersion_window(double lambda) {
  if (!(lambda > dispersion_window_min && lambda < dispersion_window_max))
    throw DomainError("wavelength outside the 1.4-1.7 um dispersion model window");
}

/// Linear dispersion model D = S (lambda - lambda_zdw), beta2 = -lambda^2 D / (2 pi c).
inline Dispersion dispersion_at(double lambda, const FiberSpec& fiber) {
  check_dispersion_window(lambda);
  const double d = fiber.dispersion_slope * (lambda - fiber.zdw);
  const double beta2 = -lambda * lambda * d / (2.0 * constants::pi * constants::speed_of_light);
  return {d, beta2};
}

/// d(beta2)/d(omega) of the linear-D model at lambda.
inline double beta3_at(double lambda, const FiberSpec& fiber) {
  check_dispersion_window(lambda);
  const double s = fiber.dispersion_slope;
  const double two_pi_c = 2.0 * constants::pi * constants::speed_of_light;
  const double dbeta2_dlambda = -(2.0 * lambda * s * (lambda - fiber.zdw) + lambda * lambda * s) / two_pi_c;
  const double dlambda_domega = -lambda * lambda / two_pi_c;
  return dbeta2_dlambda * dlambda_domega;
}

/// Propagation constant relative to its value and slope at the ZDW:
/// beta(w) = int_{w_z}^{w} (w - w') beta2(w') dw', closed form for the linear-D model.
///
/// With eps = w / w_z - 1 this is  S 2 pi c lambda_z [ (eps - log1p(eps)) - eps^2 / (2 (1 + eps)) ].
/// Constant and linear terms drop out of every energy-conserving mixing combination.
inline double relative_propagation_constant(double omega, const FiberSpec& fiber) {
  const double two_pi_c = 2.0 * constants::pi * constants::speed_of_light;
  const double omega_z = two_pi_c / fiber.zdw;
  const double eps = omega / omega_z - 1.0;
  double bracket;
  if (std::abs(eps) < 1e-3) {
    // sum_{n>=3} (-1)^n eps^n (1/n - 1/2) = eps^3/6 - eps^4/4 + 3 eps^5/10 - ...
    bracket = 0.0;
    double term = eps * eps;  // eps^n
    for (int n = 3; n < 14; ++n) {
      term *= eps;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      bracket += sign * term * (1.0 / n - 0.5);
    }
  } else {
    bracket = (eps - std::log1p(eps)) - eps * eps / (2.0 * (1.0 + eps));
  }
  return fiber.dispersion_slope * two_pi_c * fiber.zdw * bracket;
}

inline double relative_propagation_constant_at(double lambda, const FiberSpec& fiber) {
  check_dispersion_window(lambda);
  return relative_propagation_constant(2.0 * constants::pi * frequency_of(lambda), fiber);
}

/// Linear phase mismatch of Bragg scattering, beta(i) + beta(p2) - beta(s) - beta(p1).
inline double delta_beta_bs(double lambda_s, double lambda_p1, double lambda_p2, const FiberSpec& fiber) {
  const double lambda_i = bs_idler_wavelength(lambda_s, lambda_p1, lambda_p2);
  return relative_propagation_constant_at(lambda_i, fiber) + relative_propagation_constant_at(lambda_p2, fiber) -
         relative_propagation_constant_at(lambda_s, fiber) - relative_propagation_constant_at(lambda_p1, fiber);
}

/// Linear phase mismatch of degenerate FWM, beta(i) + beta(s) - 2 beta(p).
inline double delta_beta_dfwm(double lambda_s, double lambda_p, const FiberSpec& fiber) {
  const double lambda_i = dfwm_idler_wavelength(lambda_s, lambda_p);
  return relative_propagation_constant_at(lambda_i, fiber) + relative_propagation_constant_at(lambda_s, fiber) -
         2.0 * relative_propagation_constant_at(lambda_p, fiber);
}

}  // namespace fwmlab
