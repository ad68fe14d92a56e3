#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fwmlab/fiber.hpp"
#include "fwmlab/polarization.hpp"
#include "fwmlab/wavelength.hpp"

namespace fwmlab {

/// Polarization-dependent coupling of the two mixing processes.
///
/// Expanding (A^H A) A for A = a1 j1 + a2 j2 + as js, the Bragg-scattering drive a1 as conj(a2)
/// points along  <j2|j1> js + <j2|js> j1  and the degenerate drive a1^2 conj(as) along <js|j1> j1.
/// bs_factor is the Bragg coupling relative to the all-parallel arrangement.
struct Coupling {
  double bs_factor;
  double dfwm_factor;
  bool dfwm_active() const { return dfwm_factor > 1e-12; }
};

inline Coupling coupling_for(const JonesTriple& j) {
  const cplx a = inner(j.pump2, j.pump1);
  const cplx b = inner(j.pump2, j.signal);
  const cplx vx = a * j.signal.cx() + b * j.pump1.cx();
  const cplx vy = a * j.signal.cy() + b * j.pump1.cy();
  const double bs = 0.5 * std::sqrt(std::norm(vx) + std::norm(vy));
  const double dfwm = std::abs(inner(j.signal, j.pump1));
  return {bs, dfwm};
}

inline Coupling coupling_for(PolarizationCase c) { return coupling_for(jones_triple(c)); }

/// Unit vector of the Bragg-scattering idler polarization, if the process is allowed.
inline std::optional<JonesVector> bs_idler_polarization(const JonesTriple& j) {
  const cplx a = inner(j.pump2, j.pump1);
  const cplx b = inner(j.pump2, j.signal);
  const cplx vx = a * j.signal.cx() + b * j.pump1.cx();
  const cplx vy = a * j.signal.cy() + b * j.pump1.cy();
  if (std::norm(vx) + std::norm(vy) < 1e-24) return std::nullopt;
  return JonesVector(vx, vy);
}

/// Frozen per-case table: bs_factor {1, 1/2, 1/2, 0}, degenerate mixing in A and D only.
struct CouplingTable {
  static double bs_factor(PolarizationCase c) { return coupling_for(c).bs_factor; }
  static bool dfwm_active(PolarizationCase c) { return coupling_for(c).dfwm_active(); }
};

/// Signal and idler photon-flux fractions of a two-mode exchange after length z.
struct ExchangeFractions {
  double signal;
  double idler;
};

/// Two-mode exchange dB_i/dz = i kappa B_s exp(i dbeta z) with B_i(0) = 0:
/// idler = (kappa/g)^2 sin^2(g z), signal = 1 - idler, g = sqrt(kappa^2 + (dbeta/2)^2).
inline ExchangeFractions exchange_fractions(double kappa, double delta_beta, double z) {
  const double g = std::sqrt(kappa * kappa + 0.25 * delta_beta * delta_beta);
  if (g == 0.0) return {1.0, 0.0};
  const double s = std::sin(g * z);
  const double idler = kappa * kappa / (g * g) * s * s;
  const double c = std::cos(g * z);
  const double signal = c * c + 0.25 * delta_beta * delta_beta / (g * g) * s * s;
  return {signal, idler};
}

/// Bragg-scattering conversion efficiency with kappa = bs_factor * 2 gamma sqrt(P1 P2).
inline double bs_efficiency(double p1, double p2, double gamma, double length, double delta_beta, double bs_factor) {
  if (p1 < 0.0 || p2 < 0.0) throw DomainError("pump powers must be non-negative");
  const double kappa = bs_factor * 2.0 * gamma * std::sqrt(p1 * p2);
  return exchange_fractions(kappa, delta_beta, length).idler;
}

inline double bs_efficiency(double p1, double p2, double gamma, double length, double delta_beta,
                            PolarizationCase c) {
  return bs_efficiency(p1, p2, gamma, length, delta_beta, CouplingTable::bs_factor(c));
}

/// Degenerate-mixing idler efficiency: the same closed form with kappa = dfwm_factor * gamma * P.
inline double dfwm_efficiency(double p, double gamma, double length, double delta_beta, double dfwm_factor) {
  if (p < 0.0) throw DomainError("pump power must be non-negative");
  const double kappa = dfwm_factor * gamma * p;
  return exchange_fractions(kappa, delta_beta, length).idler;
}

inline double dfwm_efficiency(double p, double gamma, double length, double delta_beta, PolarizationCase c) {
  return dfwm_efficiency(p, gamma, length, delta_beta, coupling_for(c).dfwm_factor);
}

struct SweepRow {
  double lambda_s;
  double lambda_i;
  double delta_beta;
  double eta_db;
  PolarizationCase polarization;
};

/// Bragg efficiency over a list of signal wavelengths at fixed pumps.
inline std::vector<SweepRow> efficiency_sweep(const std::vector<double>& signal_wavelengths, double lambda_p1,
                                              double lambda_p2, double p1, double p2, const FiberSpec& fiber,
                                              PolarizationCase c) {
  std::vector<SweepRow> rows;
  rows.reserve(signal_wavelengths.size());
  for (double ls : signal_wavelengths) {
    const double li = bs_idler_wavelength(ls, lambda_p1, lambda_p2);
    const double db = delta_beta_bs(ls, lambda_p1, lambda_p2, fiber);
    const double eta = bs_efficiency(p1, p2, fiber.gamma, fiber.length, db, c);
    const double eta_db = eta > 0.0 ? 10.0 * std::log10(eta) : -std::numeric_limits<double>::infinity();
    rows.push_back({ls, li, db, eta_db, c});
  }
  return rows;
}

}  // namespace fwmlab
