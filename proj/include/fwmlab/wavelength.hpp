#pragma once

#include "fwmlab/common.hpp"

namespace fwmlab {

// Frequency bookkeeping for the mixing products. All arithmetic is done on
// absolute optical frequencies and converted back at the end.

/// Bragg-scattering idler: nu_i = nu_s + nu_p1 - nu_p2.
inline double bs_idler_wavelength(double lambda_s, double lambda_p1, double lambda_p2) {
  const double nu = frequency_of(lambda_s) + frequency_of(lambda_p1) - frequency_of(lambda_p2);
  if (!(nu > 0.0)) throw DomainError("Bragg-scattering idler frequency is not positive");
  return wavelength_of(nu);
}

/// Signal that a given idler was converted from: nu_s = nu_i - nu_p1 + nu_p2.
inline double bs_signal_wavelength(double lambda_i, double lambda_p1, double lambda_p2) {
  const double nu = frequency_of(lambda_i) - frequency_of(lambda_p1) + frequency_of(lambda_p2);
  if (!(nu > 0.0)) throw DomainError("Bragg-scattering signal frequency is not positive");
  return wavelength_of(nu);
}

/// Degenerate FWM idler: nu_i = 2 nu_p - nu_s.
inline double dfwm_idler_wavelength(double lambda_s, double lambda_p) {
  const double nu = 2.0 * frequency_of(lambda_p) - frequency_of(lambda_s);
  if (!(nu > 0.0)) throw DomainError("degenerate FWM idler frequency is not positive");
  return wavelength_of(nu);
}

}  // namespace fwmlab
