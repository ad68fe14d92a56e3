#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fwmlab/common.hpp"
#include "fwmlab/spectrum.hpp"

namespace fwmlab {

/// Gated single-photon counter.
struct DetectorSpec {
  double efficiency = 0.10;
  double gate = 2.5 * units::ns;
  double trigger_rate = 1e5;       // Hz
  double dark_prob_per_ns = 2.7e-6;

  void validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("detection efficiency must lie in [0, 1]");
    if (!(gate > 0.0) || !(trigger_rate > 0.0)) throw DomainError("gate and trigger rate must be positive");
    if (gate * trigger_rate > 1.0) throw DomainError("gate longer than the trigger period");
    if (!(dark_prob_per_ns >= 0.0)) throw DomainError("dark-count probability must be non-negative");
  }

  /// Dark-click probability per gate, linear in gate length.
  double dark_probability() const { return dark_prob_per_ns * (gate / units::ns); }
};

/// Ideal rectangular passband with a flat insertion loss and a flat out-of-band rejection.
/// An attenuator is an element whose passband covers every frequency.
struct FilterElement {
  std::string name;
  double center = 0.0;      // absolute optical frequency, Hz
  double bandwidth = std::numeric_limits<double>::infinity();  // Hz, full width
  double insertion_loss_db = 0.0;
  double rejection_db = 0.0;

  static FilterElement attenuator(std::string name, double loss_db) {
    return {std::move(name), 0.0, std::numeric_limits<double>::infinity(), loss_db, 0.0};
  }

  static FilterElement bandpass(std::string name, double center_wavelength, double bandwidth_hz, double insertion_db,
                                double rejection_db) {
    return {std::move(name), frequency_of(center_wavelength), bandwidth_hz, insertion_db, rejection_db};
  }

  bool passes(double frequency) const {
    return std::isinf(bandwidth) || std::abs(frequency - center) <= 0.5 * bandwidth;
  }

  double transmission(double frequency) const {
    return passes(frequency) ? db_to_transmission(insertion_loss_db) : db_to_transmission(rejection_db);
  }
};

/// Ordered cascade of filter and attenuator elements.
class FilterChain {
 public:
  FilterChain() = default;
  explicit FilterChain(std::vector<FilterElement> elements) : elements_(std::move(elements)) {
    for (const auto& e : elements_)
      if (e.rejection_db < 0.0 || e.insertion_loss_db < 0.0 || !(e.bandwidth > 0.0))
        throw DomainError("filter element '" + e.name + "' has a negative loss or empty passband");
  }

  const std::vector<FilterElement>& elements() const { return elements_; }

  void append(FilterElement e) { elements_.push_back(std::move(e)); }

  double composite_rejection_db() const {
    double s = 0.0;
    for (const auto& e : elements_) s += e.rejection_db;
    return s;
  }

  double insertion_loss_db() const {
    double s = 0.0;
    for (const auto& e : elements_) s += e.insertion_loss_db;
    return s;
  }

  /// Narrowest finite passband, or infinity for an attenuator-only chain.
  double passband_width() const {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& e : elements_) w = std::min(w, e.bandwidth);
    return w;
  }

  /// Center of the narrowest passband element.
  double passband_center() const {
    double w = std::numeric_limits<double>::infinity();
    double c = std::numeric_limits<double>::quiet_NaN();
    for (const auto& e : elements_)
      if (e.bandwidth < w) {
        w = e.bandwidth;
        c = e.center;
      }
    return c;
  }

  bool passes(double frequency) const {
    for (const auto& e : elements_)
      if (!e.passes(frequency)) return false;
    return true;
  }

  /// Product of element transmissions at one optical frequency.
  double transmission(double frequency) const {
    double t = 1.0;
    for (const auto& e : elements_) t *= e.transmission(frequency);
    return t;
  }

 private:
  std::vector<FilterElement> elements_;
};

/// Discrete spectral line (absolute frequency, power).
struct SpectralLine {
  double frequency;
  double power;
};

/// Power leaving the chain for a list of lines.
inline double apply_chain(const std::vector<SpectralLine>& lines, const FilterChain& chain) {
  double p = 0.0;
  for (const auto& l : lines) p += l.power * chain.transmission(l.frequency);
  return p;
}

/// Power leaving the chain for a sampled spectrum: in-band bins at the insertion loss,
/// out-of-band bins at the rejection.
inline double apply_chain(const AveragedSpectrum& spectrum, const FilterChain& chain) {
  const double center = chain.passband_center();
  if (std::isfinite(center) && !spectrum.grid().contains_offset(spectrum.grid().offset_of_frequency(center)))
    throw DomainError("filter channel outside spectrum span");
  const double nu0 = spectrum.grid().reference_frequency();
  const auto& off = spectrum.frequency_offsets();
  const auto& psd = spectrum.psd_total();
  double p = 0.0;
  for (std::size_t i = 0; i < psd.size(); ++i) p += psd[i] * chain.transmission(nu0 + off[i]);
  return p * spectrum.grid().df();
}

/// Mean photon number per gate, mu = P tau lambda / (h c).
inline double mean_photons_per_gate(double power, double wavelength, double gate) {
  if (power < 0.0 || !(wavelength > 0.0) || !(gate > 0.0)) throw DomainError("invalid photon-number inputs");
  return power * gate / photon_energy(wavelength);
}

/// Threshold-detector click probability for Poissonian light:
/// p = 1 - (1 - p_dark) exp(-eta mu).
inline double click_probability(double mu, const DetectorSpec& det) {
  if (mu < 0.0) throw DomainError("mean photon number must be non-negative");
  return -std::expm1(std::log1p(-det.dark_probability()) - det.efficiency * mu);
}

inline double counts_per_second(double p, const DetectorSpec& det) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("click probability must lie in [0, 1]");
  return p * det.trigger_rate;
}

}  // namespace fwmlab
