#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fwmlab {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;  // m/s, exact
inline constexpr double planck = 6.62607015e-34;       // J s, exact
inline constexpr double hbar = planck / (2.0 * pi);
inline constexpr double boltzmann = 1.380649e-23;      // J/K, exact
}  // namespace constants

/// Input outside the physical validity window of a model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced during integration.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace units {
inline constexpr double nm = 1e-9;
inline constexpr double fs = 1e-15;
inline constexpr double ps = 1e-12;
inline constexpr double ns = 1e-9;
inline constexpr double mW = 1e-3;
inline constexpr double GHz = 1e9;
inline constexpr double THz = 1e12;

// ps/(km nm^2) -> s/m^3
inline constexpr double ps_per_km_nm2 = 1e-12 / (1e3 * 1e-18);
// ps/(km nm) -> s/m^2
inline constexpr double ps_per_km_nm = 1e-12 / (1e3 * 1e-9);
// 1/(W km) -> 1/(W m)
inline constexpr double per_w_km = 1e-3;
}  // namespace units

/// Power transmission of a loss given in dB.
inline double db_to_transmission(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

inline double transmission_to_db(double t) { return -10.0 * std::log10(t); }

inline double ratio_db(double num, double den) { return 10.0 * std::log10(num / den); }

inline double frequency_of(double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw DomainError("wavelength must be positive");
  return constants::speed_of_light / wavelength_m;
}

inline double wavelength_of(double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw DomainError("optical frequency must be positive");
  return constants::speed_of_light / frequency_hz;
}

inline double photon_energy(double wavelength_m) {
  return constants::planck * constants::speed_of_light / wavelength_m;
}

}  // namespace fwmlab
