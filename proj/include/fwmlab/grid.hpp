#pragma once

#include <bit>
#include <cmath>
#include <cstddef>

#include "fwmlab/common.hpp"

namespace fwmlab {

/// Periodic time window of n_points samples and its DFT frequency axis.
///
/// Frequency offsets are relative to the reference carrier nu0 = c / reference_wavelength.
/// Bin k holds offset k*df for k < N/2 and (k - N)*df above, matching FFTW ordering.
class TimeFrequencyGrid {
 public:
  /// Smallest Nyquist half-span that keeps 1526-1564 nm plus mixing products unaliased.
  static constexpr double min_half_span_hz = 4.0e12;

  TimeFrequencyGrid(std::size_t n_points, double time_window_s, double reference_wavelength_m)
      : n_(n_points), window_(time_window_s), ref_wavelength_(reference_wavelength_m) {
    if (n_ < 2 || !std::has_single_bit(n_))
      throw DomainError("grid size must be a power of two");
    if (!(window_ > 0.0)) throw DomainError("time window must be positive");
    if (!(ref_wavelength_ > 0.0)) throw DomainError("reference wavelength must be positive");
    if (half_span() < min_half_span_hz * (1.0 - 1e-12))
      throw DomainError("grid Nyquist half-span below 4 THz; increase n_points or shrink the window");
  }

  /// 2^17 points over 16 ns around 1545 nm (df = 62.5 MHz, half-span ~4.1 THz).
  static TimeFrequencyGrid standard() { return {std::size_t{1} << 17, 16.0 * units::ns, 1545.0 * units::nm}; }

  std::size_t size() const { return n_; }
  double time_window() const { return window_; }
  double dt() const { return window_ / static_cast<double>(n_); }
  double df() const { return 1.0 / window_; }
  double half_span() const { return 0.5 * static_cast<double>(n_) * df(); }
  double reference_wavelength() const { return ref_wavelength_; }
  double reference_frequency() const { return constants::speed_of_light / ref_wavelength_; }

  double time(std::size_t n) const { return static_cast<double>(n) * dt(); }

  /// Signed frequency offset of FFT bin k.
  double offset(std::size_t k) const {
    const auto half = n_ / 2;
    const double kk = k < half ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n_);
    return kk * df();
  }

  /// Signed angular offset of FFT bin k.
  double angular_offset(std::size_t k) const { return 2.0 * constants::pi * offset(k); }

  /// Offset of an absolute optical frequency from the reference carrier.
  double offset_of_frequency(double frequency_hz) const { return frequency_hz - reference_frequency(); }

  double offset_of_wavelength(double wavelength_m) const {
    return offset_of_frequency(frequency_of(wavelength_m));
  }

  bool contains_offset(double offset_hz) const { return std::abs(offset_hz) < half_span(); }

  /// FFT bin nearest to the given offset. Throws if outside the grid span.
  std::size_t nearest_bin(double offset_hz) const {
    if (!contains_offset(offset_hz)) throw DomainError("frequency offset outside grid span");
    long long k = std::llround(offset_hz / df());
    const auto n = static_cast<long long>(n_);
    if (k < 0) k += n;
    return static_cast<std::size_t>(k) % n_;
  }

  /// FFT-ordered index of the i-th bin in ascending frequency order.
  std::size_t ascending_to_fft(std::size_t i) const { return (i + n_ / 2) % n_; }

  friend bool operator==(const TimeFrequencyGrid& a, const TimeFrequencyGrid& b) {
    return a.n_ == b.n_ && a.window_ == b.window_ && a.ref_wavelength_ == b.ref_wavelength_;
  }

 private:
  std::size_t n_;
  double window_;
  double ref_wavelength_;
};

}  // namespace fwmlab
