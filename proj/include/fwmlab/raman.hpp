#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "fwmlab/common.hpp"
#include "fwmlab/fft.hpp"
#include "fwmlab/grid.hpp"

namespace fwmlab {

/// Silica Raman response split into an isotropic and an anisotropic channel.
///
/// h_a(t) = (tau1^2 + tau2^2) / (tau1 tau2^2) exp(-t/tau2) sin(t/tau1)
/// h_b(t) = (2 tau_b - t) / tau_b^2 exp(-t/tau_b)
///
/// Isotropic kernel R_a = f_a h_a; anisotropic kernel R_b = f_b h_b + f_c h_a.
struct RamanParams {
  double raman_fraction = 0.245;
  double f_a = 0.75;
  double f_b = 0.21;
  double f_c = 0.04;
  double tau1 = 12.2 * units::fs;
  double tau2 = 32.0 * units::fs;
  double tau_b = 96.0 * units::fs;
};

enum class RamanPolarization { parallel, perpendicular };

class RamanResponse {
 public:
  const RamanParams& params() const { return p_; }

  double h_a(double t) const {
    if (t < 0.0) return 0.0;
    const double norm = (p_.tau1 * p_.tau1 + p_.tau2 * p_.tau2) / (p_.tau1 * p_.tau2 * p_.tau2);
    return norm * std::exp(-t / p_.tau2) * std::sin(t / p_.tau1);
  }

  double h_b(double t) const {
    if (t < 0.0) return 0.0;
    return (2.0 * p_.tau_b - t) / (p_.tau_b * p_.tau_b) * std::exp(-t / p_.tau_b);
  }

  /// H(W) = int h(t) exp(+i W t) dt; Im H > 0 for W > 0 is Stokes gain.
  cplx transfer_a(double omega) const {
    const double a = 1.0 / p_.tau2;
    const double b = 1.0 / p_.tau1;
    const cplx z(a, -omega);
    return (a * a + b * b) / (z * z + b * b);
  }

  cplx transfer_b(double omega) const {
    const double c = 1.0 / p_.tau_b;
    const cplx z(c, -omega);
    return 2.0 * c / z - c * c / (z * z);
  }

  cplx isotropic_transfer(double omega) const { return p_.f_a * transfer_a(omega); }
  cplx anisotropic_transfer(double omega) const { return p_.f_b * transfer_b(omega) + p_.f_c * transfer_a(omega); }

  /// Samples of h_a and h_b on t = 0, dt, ..., (n-1) dt.
  std::vector<double> tabulate_a(double dt, std::size_t n) const { return tabulate(&RamanResponse::h_a, dt, n); }
  std::vector<double> tabulate_b(double dt, std::size_t n) const { return tabulate(&RamanResponse::h_b, dt, n); }

  /// Numerical integrals of h_a and h_b over [0, inf); both must be 1.
  double integral_a() const { return integrate([this](double t) { return h_a(t); }, p_.tau2); }
  double integral_b() const { return integrate([this](double t) { return h_b(t); }, p_.tau_b); }

  friend RamanResponse build_response(const RamanParams& params);

 private:
  explicit RamanResponse(const RamanParams& p) : p_(p) {}

  std::vector<double> tabulate(double (RamanResponse::*h)(double) const, double dt, std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (this->*h)(static_cast<double>(i) * dt);
    return out;
  }

  template <class F>
  static double integrate(F f, double decay) {
    // Piecewise Gauss-Kronrod over 80 decay times; the tail beyond is below 1e-30.
    double sum = 0.0;
    const double span = 2.0 * decay;
    for (int piece = 0; piece < 40; ++piece) {
      const double lo = piece * span;
      sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, lo + span, 8, 1e-14);
    }
    return sum;
  }

  RamanParams p_;
};

/// Validates parameters and checks that both response shapes integrate to one.
inline RamanResponse build_response(const RamanParams& params) {
  const auto& p = params;
  if (!(p.tau1 > 0.0 && p.tau2 > 0.0 && p.tau_b > 0.0)) throw DomainError("Raman time constants must be positive");
  if (!(p.raman_fraction >= 0.0 && p.raman_fraction < 1.0)) throw DomainError("Raman fraction must lie in [0, 1)");
  if (p.f_a < 0.0 || p.f_b < 0.0 || p.f_c < 0.0) throw DomainError("Raman channel fractions must be non-negative");
  if (std::abs(p.f_a + p.f_b + p.f_c - 1.0) > 1e-9) throw DomainError("Raman channel fractions must sum to one");
  RamanResponse r(params);
  if (std::abs(r.integral_a() - 1.0) > 1e-9 || std::abs(r.integral_b() - 1.0) > 1e-9)
    throw DomainError("Raman response is not normalizable with these time constants");
  return r;
}

/// Raman transfer functions sampled on a simulation grid, in the sign convention of FFT
/// bin k: the forward DFT of (h * u) equals kernel[k] * U_k.
struct GridRamanKernels {
  CVector isotropic;
  CVector anisotropic;
};

inline GridRamanKernels sample_kernels(const RamanResponse& r, const TimeFrequencyGrid& grid) {
  GridRamanKernels k{CVector(grid.size()), CVector(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid.angular_offset(i);
    k.isotropic[i] = std::conj(r.isotropic_transfer(w));
    k.anisotropic[i] = std::conj(r.anisotropic_transfer(w));
  }
  return k;
}

/// Parallel/perpendicular Raman power-gain rates versus detuning W = w_pump - w_probe.
///
/// Rates are in 1/m at the given pump power (numerically equal to 1/(W m) for 1 W).
struct RamanGainCurve {
  std::vector<double> detuning;  // Hz
  std::vector<double> r_a;
  std::vector<double> r_b;
  std::vector<double> r_parallel;
  std::vector<double> r_perpendicular;
};

/// Isotropic and anisotropic gain rates at one detuning (Hz).
struct RamanGainPoint {
  double r_a;
  double r_b;
  double parallel() const { return r_a + r_b; }
  double perpendicular() const { return 0.5 * r_b; }
  double rate(RamanPolarization pol) const { return pol == RamanPolarization::parallel ? parallel() : perpendicular(); }
};

inline RamanGainPoint gain_at(const RamanResponse& r, double gamma, double pump_power, double detuning_hz) {
  const double w = 2.0 * constants::pi * detuning_hz;
  const double scale = 2.0 * gamma * r.params().raman_fraction * pump_power;
  return {scale * r.isotropic_transfer(w).imag(), scale * r.anisotropic_transfer(w).imag()};
}

inline RamanGainCurve gain_curves(const RamanResponse& r, double gamma, double pump_power,
                                  const std::vector<double>& detunings_hz) {
  if (!(pump_power >= 0.0)) throw DomainError("pump power must be non-negative");
  RamanGainCurve c;
  c.detuning = detunings_hz;
  for (double d : detunings_hz) {
    const auto g = gain_at(r, gamma, pump_power, d);
    c.r_a.push_back(g.r_a);
    c.r_b.push_back(g.r_b);
    c.r_parallel.push_back(g.parallel());
    c.r_perpendicular.push_back(g.perpendicular());
  }
  return c;
}

/// Bose-Einstein phonon occupancy 1 / (exp(hbar W / kB T) - 1).
inline double thermal_occupancy(double omega, double temperature) {
  if (!(omega > 0.0)) throw DomainError("phonon angular frequency must be positive");
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  return 1.0 / std::expm1(constants::hbar * omega / (constants::boltzmann * temperature));
}

/// Signal power after stimulated Raman exchange with one pump over L_eff.
/// detuning_hz = nu_pump - nu_signal: positive (Stokes signal) gains, negative loses.
inline double stimulated_exchange(double signal_power, double pump_power, double detuning_hz, RamanPolarization pol,
                                  double effective_length, const RamanResponse& r, double gamma) {
  if (pump_power == 0.0) return signal_power;
  const double rate = gain_at(r, gamma, pump_power, detuning_hz).rate(pol);
  return signal_power * std::exp(rate * effective_length);
}

/// Spontaneous Raman photon flux (photons/s) scattered by one pump into bandwidth B at a
/// detuning nu_pump - nu_channel. Stokes side carries (n_th + 1), anti-Stokes n_th.
/// Low-gain linearization of the distributed emission.
inline double spontaneous_flux(double pump_power, double effective_length, double detuning_hz, double bandwidth_hz,
                               RamanPolarization pol, double temperature, const RamanResponse& r, double gamma) {
  if (detuning_hz == 0.0) throw DomainError("spontaneous Raman flux is undefined at zero detuning");
  if (!(bandwidth_hz > 0.0)) throw DomainError("detection bandwidth must be positive");
  if (!(temperature >= 0.0)) throw DomainError("temperature must be non-negative");
  const double abs_detuning = std::abs(detuning_hz);
  const double rate = gain_at(r, gamma, pump_power, abs_detuning).rate(pol);
  double occupancy;
  if (temperature == 0.0) {
    occupancy = 0.0;
  } else {
    occupancy = thermal_occupancy(2.0 * constants::pi * abs_detuning, temperature);
  }
  const double factor = detuning_hz > 0.0 ? occupancy + 1.0 : occupancy;
  return rate * effective_length * bandwidth_hz * factor;
}

/// Same flux with a mixed pump/analyzer geometry: fraction w of the pump along the analyzer
/// scatters with the parallel rate, the rest with the perpendicular rate.
inline double spontaneous_flux_projected(double pump_power, double effective_length, double detuning_hz,
                                         double bandwidth_hz, double parallel_fraction, double temperature,
                                         const RamanResponse& r, double gamma) {
  const double par = spontaneous_flux(pump_power, effective_length, detuning_hz, bandwidth_hz,
                                      RamanPolarization::parallel, temperature, r, gamma);
  const double perp = spontaneous_flux(pump_power, effective_length, detuning_hz, bandwidth_hz,
                                       RamanPolarization::perpendicular, temperature, r, gamma);
  return parallel_fraction * par + (1.0 - parallel_fraction) * perp;
}

}  // namespace fwmlab
