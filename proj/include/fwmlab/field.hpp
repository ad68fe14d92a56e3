#pragma once

#include <cmath>
#include <stdexcept>

#include "fwmlab/fft.hpp"
#include "fwmlab/grid.hpp"
#include "fwmlab/polarization.hpp"

namespace fwmlab {

/// Two-component slowly varying envelope in sqrt(W) sampled on a shared grid.
///
/// Envelopes use exp(+2 pi i f t) for a component at optical offset +f, so FFT bin k
/// maps directly to grid.offset(k).
class PolarizedField {
 public:
  explicit PolarizedField(TimeFrequencyGrid grid) : grid_(grid), ax_(grid.size()), ay_(grid.size()) {}

  PolarizedField(TimeFrequencyGrid grid, CVector ax, CVector ay)
      : grid_(grid), ax_(std::move(ax)), ay_(std::move(ay)) {
    if (ax_.size() != grid_.size() || ay_.size() != grid_.size())
      throw std::invalid_argument("field component length does not match grid");
  }

  static PolarizedField zero(const TimeFrequencyGrid& grid) { return PolarizedField(grid); }

  const TimeFrequencyGrid& grid() const { return grid_; }
  std::size_t size() const { return ax_.size(); }

  CVector& ax() { return ax_; }
  CVector& ay() { return ay_; }
  const CVector& ax() const { return ax_; }
  const CVector& ay() const { return ay_; }

  double power_x() const { return mean_norm(ax_); }
  double power_y() const { return mean_norm(ay_); }

  /// mean(|ax|^2 + |ay|^2) over the window, in W.
  double average_power() const { return power_x() + power_y(); }

  /// Time-integrated energy sum(|ax|^2 + |ay|^2) dt, in J.
  double energy() const { return average_power() * grid_.time_window(); }

  bool all_finite() const {
    for (std::size_t n = 0; n < size(); ++n)
      if (!std::isfinite(ax_[n].real()) || !std::isfinite(ax_[n].imag()) || !std::isfinite(ay_[n].real()) ||
          !std::isfinite(ay_[n].imag()))
        return false;
    return true;
  }

  /// Apply one global Jones matrix to every sample.
  PolarizedField rotated(const JonesMatrix& m) const {
    PolarizedField out(grid_);
    for (std::size_t n = 0; n < size(); ++n) {
      out.ax_[n] = m.m00 * ax_[n] + m.m01 * ay_[n];
      out.ay_[n] = m.m10 * ax_[n] + m.m11 * ay_[n];
    }
    return out;
  }

  PolarizedField& operator+=(const PolarizedField& other) {
    if (!(other.grid_ == grid_)) throw std::invalid_argument("cannot add fields on different grids");
    for (std::size_t n = 0; n < size(); ++n) {
      ax_[n] += other.ax_[n];
      ay_[n] += other.ay_[n];
    }
    return *this;
  }

 private:
  static double mean_norm(const CVector& v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  }

  TimeFrequencyGrid grid_;
  CVector ax_;
  CVector ay_;
};

}  // namespace fwmlab
