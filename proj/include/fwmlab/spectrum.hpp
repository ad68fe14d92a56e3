#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fwmlab/field.hpp"

namespace fwmlab {

/// Per-bin power spectral density of one field, FFT ordering, W/Hz.
struct Periodogram {
  RVector psd_x;
  RVector psd_y;
};

/// Unwindowed periodogram: psd_k = |FFT(a)_k|^2 / (N^2 df). Sum(psd) df equals the average power.
inline Periodogram periodogram(const PolarizedField& field) {
  const auto& grid = field.grid();
  const std::size_t n = grid.size();
  const Fft fft(n);
  CVector buf(n);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n) * grid.df());
  Periodogram p{RVector(n), RVector(n)};
  fft.forward(field.ax(), buf);
  for (std::size_t k = 0; k < n; ++k) p.psd_x[k] = std::norm(buf[k]) * scale;
  fft.forward(field.ay(), buf);
  for (std::size_t k = 0; k < n; ++k) p.psd_y[k] = std::norm(buf[k]) * scale;
  return p;
}

/// Ensemble-mean spectrum on ascending frequency offsets.
class AveragedSpectrum {
 public:
  AveragedSpectrum(TimeFrequencyGrid grid, RVector psd_x, RVector psd_y, int n_runs)
      : grid_(grid), psd_x_(std::move(psd_x)), psd_y_(std::move(psd_y)), n_runs_(n_runs) {
    if (psd_x_.size() != grid_.size() || psd_y_.size() != grid_.size())
      throw std::invalid_argument("spectrum length does not match grid");
    psd_total_.resize(grid_.size());
    offsets_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      psd_total_[i] = psd_x_[i] + psd_y_[i];
      offsets_[i] = (static_cast<double>(i) - static_cast<double>(grid_.size() / 2)) * grid_.df();
    }
  }

  /// Reorders FFT-ordered sums of periodograms into an ascending-frequency mean.
  static AveragedSpectrum from_fft_order_sums(const TimeFrequencyGrid& grid, const RVector& sum_x,
                                              const RVector& sum_y, int n_runs) {
    RVector x(grid.size()), y(grid.size());
    const double inv = 1.0 / static_cast<double>(n_runs);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto k = grid.ascending_to_fft(i);
      x[i] = sum_x[k] * inv;
      y[i] = sum_y[k] * inv;
    }
    return {grid, std::move(x), std::move(y), n_runs};
  }

  const TimeFrequencyGrid& grid() const { return grid_; }
  const RVector& frequency_offsets() const { return offsets_; }
  const RVector& psd_x() const { return psd_x_; }
  const RVector& psd_y() const { return psd_y_; }
  const RVector& psd_total() const { return psd_total_; }
  int n_runs() const { return n_runs_; }

  double wavelength_at(std::size_t i) const { return wavelength_of(grid_.reference_frequency() + offsets_[i]); }

  double total_power() const {
    double s = 0.0;
    for (double v : psd_total_) s += v;
    return s * grid_.df();
  }

  /// Integrated power over [center - halfwidth, center + halfwidth].
  double band_power(double center_offset_hz, double halfwidth_hz) const {
    return band_power(psd_total_, center_offset_hz, halfwidth_hz);
  }
  double band_power_x(double center_offset_hz, double halfwidth_hz) const {
    return band_power(psd_x_, center_offset_hz, halfwidth_hz);
  }
  double band_power_y(double center_offset_hz, double halfwidth_hz) const {
    return band_power(psd_y_, center_offset_hz, halfwidth_hz);
  }

 private:
  double band_power(const RVector& psd, double center, double halfwidth) const {
    if (!(halfwidth > 0.0)) throw DomainError("band halfwidth must be positive");
    if (!grid_.contains_offset(center)) throw DomainError("band center outside spectrum span");
    double s = 0.0;
    for (std::size_t i = 0; i < psd.size(); ++i)
      if (std::abs(offsets_[i] - center) <= halfwidth) s += psd[i];
    return s * grid_.df();
  }

  TimeFrequencyGrid grid_;
  RVector psd_x_;
  RVector psd_y_;
  RVector psd_total_;
  RVector offsets_;
  int n_runs_;
};

}  // namespace fwmlab
