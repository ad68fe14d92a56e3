#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

#include "fwmlab/field.hpp"

namespace fwmlab {

enum class SourceKind { cw, ifsfl };

/// Power spectral shape of a broadband source.
enum class SpectralProfile { gaussian, flat_top };

struct SourceSpec {
  SourceKind kind = SourceKind::cw;
  double power = 0.0;       // W, average
  double wavelength = 1550e-9;
  double bandwidth = 0.0;   // Hz, FWHM of the power spectrum
  JonesVector jones = JonesVector::x();
  std::uint64_t seed = 0;
  SpectralProfile profile = SpectralProfile::gaussian;
};

/// Reproducible per-source seed for ensemble member run_index.
inline std::uint64_t ensemble_seed(std::uint64_t base_seed, std::uint64_t run_index) { return base_seed ^ run_index; }

namespace detail {
inline void check_power(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("source power must be finite and non-negative");
}
}  // namespace detail

/// Ideal monochromatic carrier snapped to the nearest grid bin, so the spectrum is a single bin.
inline PolarizedField make_cw(const SourceSpec& spec, const TimeFrequencyGrid& grid) {
  detail::check_power(spec.power);
  const double offset = grid.offset_of_wavelength(spec.wavelength);
  if (!grid.contains_offset(offset)) throw DomainError("CW carrier outside grid span");
  PolarizedField field(grid);
  if (spec.power == 0.0) return field;
  const std::size_t k = grid.nearest_bin(offset);
  const double amplitude = std::sqrt(spec.power);
  const cplx jx = spec.jones.cx() * amplitude;
  const cplx jy = spec.jones.cy() * amplitude;
  const auto n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Integer phase index keeps the carrier exactly periodic on the window.
    const std::size_t phase_index = (k * i) % n;
    const cplx carrier = std::polar(1.0, 2.0 * constants::pi * static_cast<double>(phase_index) / static_cast<double>(n));
    field.ax()[i] = jx * carrier;
    field.ay()[i] = jy * carrier;
  }
  return field;
}

/// Broadband stationary source: independent circular-Gaussian spectral bins whose variance
/// follows the power profile. The realization mean power equals spec.power.
inline PolarizedField make_ifsfl(const SourceSpec& spec, const TimeFrequencyGrid& grid) {
  detail::check_power(spec.power);
  if (!(spec.bandwidth > 0.0)) throw DomainError("broadband source needs a positive bandwidth");
  const double center = grid.offset_of_wavelength(spec.wavelength);
  if (!grid.contains_offset(center - 3.0 * spec.bandwidth) || !grid.contains_offset(center + 3.0 * spec.bandwidth))
    throw DomainError("broadband source carrier +/- 3 FWHM does not fit in the grid");
  if (spec.bandwidth < 4.0 * grid.df()) throw DomainError("source bandwidth not resolved by the grid");

  const auto n = grid.size();
  RVector weight(n, 0.0);
  double weight_sum = 0.0;
  const double support = spec.profile == SpectralProfile::gaussian ? 6.0 * spec.bandwidth : 0.5 * spec.bandwidth;
  const double four_ln2 = 4.0 * std::log(2.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double d = grid.offset(k) - center;
    if (std::abs(d) > support) continue;
    const double u = d / spec.bandwidth;
    weight[k] = spec.profile == SpectralProfile::gaussian ? std::exp(-four_ln2 * u * u) : 1.0;
    weight_sum += weight[k];
  }

  PolarizedField field(grid);
  if (spec.power == 0.0) return field;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector spectrum(n);
  const double scale = static_cast<double>(n) * std::sqrt(spec.power / weight_sum);
  // Draw in ascending-frequency order so a seed's realization does not depend on FFT layout details.
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = grid.ascending_to_fft(i);
    if (weight[k] == 0.0) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    spectrum[k] = scale * std::sqrt(weight[k]) * cplx(re, im);
  }
  Fft(n).inverse(spectrum);
  for (std::size_t i = 0; i < n; ++i) {
    field.ax()[i] = spec.jones.cx() * spectrum[i];
    field.ay()[i] = spec.jones.cy() * spectrum[i];
  }
  return field;
}

inline PolarizedField make_source(const SourceSpec& spec, const TimeFrequencyGrid& grid) {
  return spec.kind == SourceKind::cw ? make_cw(spec, grid) : make_ifsfl(spec, grid);
}

/// Lossless element-wise sum. All fields must share one grid.
inline PolarizedField superpose(std::span<const PolarizedField> fields) {
  if (fields.empty()) throw std::invalid_argument("superpose needs at least one field");
  PolarizedField out(fields.front().grid());
  for (const auto& f : fields) out += f;
  return out;
}

}  // namespace fwmlab
