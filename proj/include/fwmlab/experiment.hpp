#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fwmlab/config.hpp"
#include "fwmlab/coupled_mode.hpp"
#include "fwmlab/detection.hpp"
#include "fwmlab/propagation.hpp"
#include "fwmlab/raman.hpp"
#include "fwmlab/sources.hpp"
#include "fwmlab/spectrum.hpp"

namespace fwmlab {

// ---------------------------------------------------------------------------
// Scenario assembly

/// Salt separating the two pump streams that share one run seed.
inline constexpr std::uint64_t pump2_seed_salt = 0x9E3779B97F4A7C15ull;

inline std::uint64_t pump_seed(std::uint64_t base_seed, int run, int pump) {
  const auto s = ensemble_seed(base_seed, static_cast<std::uint64_t>(run));
  return pump == 1 ? s : s ^ pump2_seed_salt;
}

/// Signal power at the fiber input. Counting runs add the ECL attenuator to the tap loss.
inline double signal_input_power(const ScenarioConfig& cfg, bool counting) {
  double db = cfg.loss.tap_db;
  if (counting) db += cfg.loss.signal_attenuator_db;
  return cfg.signal.power * db_to_transmission(db);
}

struct ActiveSources {
  bool pump1 = true;
  bool pump2 = true;
  bool signal = true;
};

inline SourceSpec source_spec(const SourceConfig& s, const JonesVector& jones, double power, std::uint64_t seed) {
  SourceSpec spec;
  spec.kind = s.kind;
  spec.power = power;
  spec.wavelength = s.wavelength;
  spec.bandwidth = s.bandwidth;
  spec.jones = jones;
  spec.seed = seed;
  spec.profile = s.profile;
  return spec;
}

/// Input field factory for ensemble member `run`.
inline InputFactory scenario_inputs(const ScenarioConfig& cfg, const TimeFrequencyGrid& grid, ActiveSources on,
                                    double signal_power) {
  const auto triple = jones_triple(cfg.pcase);
  return [=](int run) {
    PolarizedField f(grid);
    if (on.pump1 && cfg.pump1.enabled)
      f += make_source(source_spec(cfg.pump1, triple.pump1, cfg.pump1.power, pump_seed(cfg.base_seed, run, 1)), grid);
    if (on.pump2 && cfg.pump2.enabled)
      f += make_source(source_spec(cfg.pump2, triple.pump2, cfg.pump2.power, pump_seed(cfg.base_seed, run, 2)), grid);
    if (on.signal && cfg.signal.enabled)
      f += make_source(source_spec(cfg.signal, triple.signal, signal_power, ensemble_seed(cfg.base_seed, run)), grid);
    return f;
  };
}

inline double bs_idler_of(const ScenarioConfig& cfg) {
  return bs_idler_wavelength(cfg.signal.wavelength, cfg.pump1.wavelength, cfg.pump2.wavelength);
}

inline double dfwm_idler_of(const ScenarioConfig& cfg) {
  return dfwm_idler_wavelength(cfg.signal.wavelength, cfg.pump1.wavelength);
}

/// Coupled-mode efficiencies at the configured pump powers.
struct MixingTerms {
  double delta_beta_bs;
  double delta_beta_dfwm;
  double eta_bs;
  double eta_dfwm;
};

inline MixingTerms mixing_terms(const ScenarioConfig& cfg, bool pump1_on, bool pump2_on) {
  const double p1 = pump1_on && cfg.pump1.enabled ? cfg.pump1.power : 0.0;
  const double p2 = pump2_on && cfg.pump2.enabled ? cfg.pump2.power : 0.0;
  const auto& f = cfg.fiber;
  double db_bs = delta_beta_bs(cfg.signal.wavelength, cfg.pump1.wavelength, cfg.pump2.wavelength, f);
  double db_dfwm = delta_beta_dfwm(cfg.signal.wavelength, cfg.pump1.wavelength, f);
  if (cfg.xpm_mismatch) {
    db_bs += f.gamma * (p1 - p2);
    db_dfwm += 2.0 * f.gamma * p1;
  }
  const auto c = coupling_for(cfg.pcase);
  const double length = f.effective_length();
  return {db_bs, db_dfwm, bs_efficiency(p1, p2, f.gamma, length, db_bs, c.bs_factor),
          dfwm_efficiency(p1, f.gamma, length, db_dfwm, c.dfwm_factor)};
}

// ---------------------------------------------------------------------------
// Spectra

struct BandMarker {
  std::string name;
  double wavelength;
  double offset;
  double power;  // W, integrated over +/- band halfwidth
};

struct SpectrumResult {
  AveragedSpectrum spectrum;
  std::vector<BandMarker> bands;
  double signal_input_power;
  double eta_ssfm_db;  // BS idler photon flux over input signal photon flux
  double eta_cm_db;
};

inline double to_db(double v) { return v > 0.0 ? 10.0 * std::log10(v) : -std::numeric_limits<double>::infinity(); }

inline SpectrumResult spectrum_for(const ScenarioConfig& cfg, ActiveSources on, double signal_power) {
  const auto grid = cfg.grid();
  const auto spectrum = ensemble_spectrum(scenario_inputs(cfg, grid, on, signal_power), grid, cfg.fiber, cfg.step,
                                          cfg.runs, build_response(cfg.raman_params()), cfg.threads);
  std::vector<BandMarker> bands;
  auto mark = [&](const std::string& name, double lambda) {
    const double off = grid.offset_of_wavelength(lambda);
    bands.push_back({name, lambda, off, spectrum.band_power(off, cfg.band_halfwidth)});
  };
  mark("signal", cfg.signal.wavelength);
  mark("bs_idler", bs_idler_of(cfg));
  mark("dfwm_idler", dfwm_idler_of(cfg));

  const double nu_s = frequency_of(cfg.signal.wavelength);
  const double nu_i = frequency_of(bs_idler_of(cfg));
  const double flux_in = signal_power / nu_s;
  const double eta_ssfm = flux_in > 0.0 ? (bands[1].power / nu_i) / flux_in : 0.0;
  const double eta_cm = mixing_terms(cfg, on.pump1, on.pump2).eta_bs;
  return {spectrum, bands, signal_power, to_db(eta_ssfm), to_db(eta_cm)};
}

/// Ensemble-averaged output spectrum for the configured scenario, strong-signal regime.
inline SpectrumResult run_spectrum_experiment(const ScenarioConfig& cfg) {
  return spectrum_for(cfg, ActiveSources{}, signal_input_power(cfg, false));
}

inline void write_spectrum_csv(std::ostream& os, const AveragedSpectrum& s) {
  CsvWriter w(os);
  w.header({"frequency_offset_hz", "lambda_nm", "psd_total_w_per_hz"});
  const auto& off = s.frequency_offsets();
  const auto& psd = s.psd_total();
  for (std::size_t i = 0; i < psd.size(); ++i) w.row(off[i], s.wavelength_at(i) / units::nm, psd[i]);
}

/// SSFM versus coupled-mode BS efficiency for one or more cases.
struct CrosscheckRow {
  PolarizationCase pcase;
  double eta_ssfm_db;
  double eta_cm_db;
  double bs_band;
  double dfwm_band;
  double difference_db() const { return eta_ssfm_db - eta_cm_db; }
};

inline std::vector<CrosscheckRow> crosscheck_ssfm(const ScenarioConfig& base, const std::vector<PolarizationCase>& cases) {
  std::vector<CrosscheckRow> rows;
  for (auto c : cases) {
    auto cfg = base;
    cfg.pcase = c;
    const auto r = run_spectrum_experiment(cfg);
    rows.push_back({c, r.eta_ssfm_db, r.eta_cm_db, r.bands[1].power, r.bands[2].power});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Photon counting

enum class ToggleCondition { all_on, pump1_signal, signal_only, pump2_signal };

inline constexpr std::array<ToggleCondition, 4> all_conditions{ToggleCondition::all_on, ToggleCondition::pump1_signal,
                                                               ToggleCondition::signal_only,
                                                               ToggleCondition::pump2_signal};

inline std::string to_string(ToggleCondition c) {
  switch (c) {
    case ToggleCondition::all_on: return "P1P2S";
    case ToggleCondition::pump1_signal: return "P1S";
    case ToggleCondition::signal_only: return "S";
    case ToggleCondition::pump2_signal: return "P2S";
  }
  return "?";
}

inline ActiveSources active_sources(ToggleCondition c) {
  switch (c) {
    case ToggleCondition::all_on: return {true, true, true};
    case ToggleCondition::pump1_signal: return {true, false, true};
    case ToggleCondition::signal_only: return {false, false, true};
    case ToggleCondition::pump2_signal: return {false, true, true};
  }
  return {};
}

/// Discrete wave at the fiber output.
struct OpticalLine {
  std::string name;
  double frequency;
  double power;
  JonesVector polarization;
};

/// Detection arm: analyzer polarization, filter chain and center wavelength.
struct Channel {
  std::string name;
  double wavelength;
  JonesVector analyzer;
  FilterChain chain;
  std::string target_line;
};

inline FilterChain channel_chain(const ChannelFilters& f, double wavelength, double extra_attenuation_db) {
  FilterChain chain;
  chain.append(FilterElement::attenuator("splitter", f.splitter_db));
  chain.append(FilterElement::bandpass("wide", wavelength, f.wide_bandwidth, f.wide_insertion_db, f.wide_rejection_db));
  chain.append(FilterElement::bandpass("tunable", wavelength, f.tunable_bandwidth, f.tunable_insertion_db,
                                       f.tunable_rejection_db));
  if (extra_attenuation_db != 0.0) chain.append(FilterElement::attenuator("attenuator", extra_attenuation_db));
  return FilterChain(chain.elements());
}

/// Signal and idler arms. The idler analyzer follows the BS idler polarization, or the
/// signal polarization where Bragg scattering is forbidden.
inline std::array<Channel, 2> counting_channels(const ScenarioConfig& cfg) {
  const auto triple = jones_triple(cfg.pcase);
  const auto idler_pol = bs_idler_polarization(triple).value_or(triple.signal);
  const double lambda_i = bs_idler_of(cfg);
  return {Channel{"signal", cfg.signal.wavelength, triple.signal,
                  channel_chain(cfg.filters, cfg.signal.wavelength, cfg.loss.signal_channel_db), "signal"},
          Channel{"idler", lambda_i, idler_pol, channel_chain(cfg.filters, lambda_i, 0.0), "bs_idler"}};
}

/// Fiber-output lines from the coupled-mode and stimulated-Raman models.
///
/// The signal gains or loses by Raman exchange with each pump present, is amplified by the
/// parametric (degenerate) process and depleted by Bragg scattering into the idler.
inline std::vector<OpticalLine> analytic_output_lines(const ScenarioConfig& cfg, ActiveSources on) {
  const auto triple = jones_triple(cfg.pcase);
  const auto resp = build_response(cfg.raman_params());
  const auto& f = cfg.fiber;
  const double leff = f.effective_length();
  const double t_fiber = std::exp(-f.alpha() * f.length);
  const bool p1 = on.pump1 && cfg.pump1.enabled;
  const bool p2 = on.pump2 && cfg.pump2.enabled;
  const bool s = on.signal && cfg.signal.enabled;
  const double nu_s = frequency_of(cfg.signal.wavelength);

  std::vector<OpticalLine> lines;
  if (p1) lines.push_back({"pump1", frequency_of(cfg.pump1.wavelength), cfg.pump1.power * t_fiber, triple.pump1});
  if (p2) lines.push_back({"pump2", frequency_of(cfg.pump2.wavelength), cfg.pump2.power * t_fiber, triple.pump2});
  if (!s) return lines;

  const double ps_in = signal_input_power(cfg, true);
  double gain = 1.0;
  auto raman_exchange = [&](const SourceConfig& pump, const JonesVector& jp) {
    const double w = overlap(jp, triple.signal);
    const auto g = gain_at(resp, f.gamma, pump.power, frequency_of(pump.wavelength) - nu_s);
    gain *= std::exp((w * g.parallel() + (1.0 - w) * g.perpendicular()) * leff);
  };
  if (p1) raman_exchange(cfg.pump1, triple.pump1);
  if (p2) raman_exchange(cfg.pump2, triple.pump2);
  const auto mix = mixing_terms(cfg, p1, p2);
  if (p1) gain *= 1.0 + mix.eta_dfwm;
  if (p1 && p2) gain *= 1.0 - mix.eta_bs;
  lines.push_back({"signal", nu_s, ps_in * gain * t_fiber, triple.signal});

  if (p1 && p2 && mix.eta_bs > 0.0) {
    const double nu_i = frequency_of(bs_idler_of(cfg));
    const auto pol = bs_idler_polarization(triple).value_or(triple.signal);
    lines.push_back({"bs_idler", nu_i, ps_in * mix.eta_bs * nu_i / nu_s * t_fiber, pol});
  }
  if (p1 && mix.eta_dfwm > 0.0) {
    const double nu_d = frequency_of(dfwm_idler_of(cfg));
    lines.push_back({"dfwm_idler", nu_d, ps_in * mix.eta_dfwm * nu_d / nu_s * t_fiber, triple.pump1});
  }
  return lines;
}

/// Detected photons per gate (efficiency times mean photon number) by origin. Dark counts
/// enter as -ln(1 - p_dark) so that p_click = 1 - exp(-sum).
struct CountDecomposition {
  double converted = 0.0;
  double raman_noise = 0.0;
  double leakage = 0.0;
  double dark = 0.0;
  double total() const { return converted + raman_noise + leakage + dark; }
};

struct CountRow {
  std::string channel;
  ToggleCondition condition;
  PolarizationCase pcase;
  double mu_per_gate;        // mean photons per gate at the detector
  double click_probability;
  double clicks_per_s;
  CountDecomposition parts;
};

struct CountReport {
  std::vector<CountRow> rows;
  double signal_input_power;

  const CountRow& at(const std::string& channel, ToggleCondition c) const {
    for (const auto& r : rows)
      if (r.channel == channel && r.condition == c) return r;
    throw std::out_of_range("no count row for " + channel + "/" + to_string(c));
  }
};

/// Spontaneous Raman photons per gate scattered into a channel by the pumps present.
inline double raman_photons_per_gate(const ScenarioConfig& cfg, const Channel& ch, ActiveSources on,
                                     const RamanResponse& resp) {
  const auto triple = jones_triple(cfg.pcase);
  const double nu_ch = frequency_of(ch.wavelength);
  const double bandwidth = ch.chain.passband_width();
  if (!std::isfinite(bandwidth)) throw DomainError("channel '" + ch.name + "' has no finite passband");
  const double leff = cfg.fiber.effective_length();
  double flux = 0.0;
  auto add = [&](const SourceConfig& pump, const JonesVector& jp) {
    flux += spontaneous_flux_projected(pump.power, leff, frequency_of(pump.wavelength) - nu_ch, bandwidth,
                                       overlap(jp, ch.analyzer), cfg.temperature, resp, cfg.fiber.gamma);
  };
  if (on.pump1 && cfg.pump1.enabled) add(cfg.pump1, triple.pump1);
  if (on.pump2 && cfg.pump2.enabled) add(cfg.pump2, triple.pump2);
  return flux * cfg.detector.gate * ch.chain.transmission(nu_ch);
}

inline CountRow count_row(const ScenarioConfig& cfg, const Channel& ch, ToggleCondition cond,
                          const std::vector<OpticalLine>& lines, const RamanResponse& resp) {
  const auto& det = cfg.detector;
  double mu_target = 0.0;
  double mu_leak = 0.0;
  for (const auto& l : lines) {
    const double p = l.power * overlap(l.polarization, ch.analyzer) * ch.chain.transmission(l.frequency);
    const double mu = p * det.gate / (constants::planck * l.frequency);
    (l.name == ch.target_line ? mu_target : mu_leak) += mu;
  }
  const double mu_raman = raman_photons_per_gate(cfg, ch, active_sources(cond), resp);
  const double mu = mu_target + mu_leak + mu_raman;
  const double p = click_probability(mu, det);
  CountDecomposition parts{det.efficiency * mu_target, det.efficiency * mu_raman, det.efficiency * mu_leak,
                           -std::log1p(-det.dark_probability())};
  return {ch.name, cond, cfg.pcase, mu, p, counts_per_second(p, det), parts};
}

/// Line powers taken from SSFM band powers instead of the coupled-mode model.
inline std::vector<OpticalLine> ssfm_output_lines(const ScenarioConfig& cfg, ActiveSources on,
                                                  const std::array<Channel, 2>& channels) {
  auto lines = analytic_output_lines(cfg, on);
  std::erase_if(lines, [](const OpticalLine& l) { return l.name == "signal" || l.name == "bs_idler"; });
  if (!(on.signal && cfg.signal.enabled)) return lines;
  const auto r = spectrum_for(cfg, on, signal_input_power(cfg, true));
  for (const auto& ch : channels) {
    // x/y projection of the band power; exact for the linear analyzers of cases A-D.
    const double off = r.spectrum.grid().offset_of_wavelength(ch.wavelength);
    const double px = r.spectrum.band_power_x(off, cfg.band_halfwidth);
    const double py = r.spectrum.band_power_y(off, cfg.band_halfwidth);
    const double wx = std::norm(ch.analyzer.cx());
    const double wy = std::norm(ch.analyzer.cy());
    const double p = wx * px + wy * py;
    lines.push_back({ch.target_line, frequency_of(ch.wavelength), p, ch.analyzer});
  }
  return lines;
}

/// Counts for both channels under the four toggle conditions.
inline CountReport run_counting_experiment(const ScenarioConfig& cfg) {
  cfg.detector.validate();
  const auto resp = build_response(cfg.raman_params());
  const auto channels = counting_channels(cfg);
  std::array<std::vector<OpticalLine>, all_conditions.size()> lines;
  for (std::size_t k = 0; k < all_conditions.size(); ++k) {
    const auto on = active_sources(all_conditions[k]);
    lines[k] = cfg.counting_path == CountingPath::analytic ? analytic_output_lines(cfg, on)
                                                           : ssfm_output_lines(cfg, on, channels);
  }
  CountReport report{{}, signal_input_power(cfg, true)};
  for (const auto& ch : channels)
    for (std::size_t k = 0; k < all_conditions.size(); ++k)
      report.rows.push_back(count_row(cfg, ch, all_conditions[k], lines[k], resp));
  return report;
}

inline void write_counts_csv(std::ostream& os, const CountReport& r) {
  CsvWriter w(os);
  w.header({"channel", "condition", "case", "mu_per_gate", "clicks_per_s"});
  for (const auto& row : r.rows)
    w.row(row.channel, to_string(row.condition), to_string(row.pcase), row.mu_per_gate, row.clicks_per_s);
}

// ---------------------------------------------------------------------------
// Raman gain scan

/// Parallel and perpendicular gain of a single narrow pump over +/- max detuning, zero excluded.
inline RamanGainCurve run_raman_scan(const ScenarioConfig& cfg) {
  const auto& rs = cfg.raman_scan;
  if (!(rs.step > 0.0) || !(rs.max_detuning >= rs.step)) throw DomainError("raman scan needs 0 < step <= max detuning");
  check_dispersion_window(rs.pump_wavelength);
  const auto n = static_cast<int>(std::floor(rs.max_detuning / rs.step * (1.0 + 1e-12)));
  std::vector<double> detunings;
  for (int k = -n; k <= n; ++k)
    if (k != 0) detunings.push_back(k * rs.step);
  return gain_curves(build_response(cfg.raman_params()), cfg.fiber.gamma, rs.pump_power, detunings);
}

inline void write_raman_scan_csv(std::ostream& os, const RamanGainCurve& c) {
  CsvWriter w(os);
  w.header({"detuning_thz", "r_parallel", "r_perpendicular", "ratio"});
  for (std::size_t i = 0; i < c.detuning.size(); ++i)
    w.row(c.detuning[i] / units::THz, c.r_parallel[i], c.r_perpendicular[i], c.r_perpendicular[i] / c.r_parallel[i]);
}

// ---------------------------------------------------------------------------
// Bragg-scattering sweep

inline std::vector<double> wavelength_range(double first, double last, double step) {
  if (!(step > 0.0) || !(last >= first)) throw ConfigError("wavelength range needs first <= last and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((last - first) / step * (1.0 + 1e-12))) + 1;
  if (n > 1000000) throw ConfigError("wavelength range has too many points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = first + static_cast<double>(i) * step;
  return out;
}

inline std::vector<SweepRow> run_bs_sweep(const ScenarioConfig& cfg, const std::vector<double>& signals) {
  return efficiency_sweep(signals, cfg.pump1.wavelength, cfg.pump2.wavelength, cfg.pump1.power, cfg.pump2.power,
                          cfg.fiber, cfg.pcase);
}

inline void write_bs_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  CsvWriter w(os);
  w.header({"lambda_s_nm", "lambda_i_nm", "delta_beta_per_m", "eta_db", "case"});
  for (const auto& r : rows)
    w.row(r.lambda_s / units::nm, r.lambda_i / units::nm, r.delta_beta, r.eta_db, to_string(r.polarization));
}

// ---------------------------------------------------------------------------
// Configuration checks without propagation

struct CheckResult {
  std::string name;
  bool ok;
  std::string detail;
};

inline std::vector<CheckResult> validate_scenario(const ScenarioConfig& cfg) {
  std::vector<CheckResult> out;
  auto check = [&out](const std::string& name, auto&& fn) {
    try {
      const std::string detail = fn();
      out.push_back({name, true, detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  auto fail_if = [](bool bad, const std::string& msg) {
    if (bad) throw DomainError(msg);
  };

  check("grid", [&] {
    const auto g = cfg.grid();
    return "df = " + format_double(g.df()) + " Hz, half-span = " + format_double(g.half_span()) + " Hz";
  });
  check("fiber", [&] {
    cfg.fiber.validate();
    return std::string("L_eff = ") + format_double(cfg.fiber.effective_length()) + " m";
  });
  check("step", [&] {
    fail_if(!(cfg.step.dz > 0.0) || cfg.step.dz > cfg.fiber.length, "propagation.dz_m must lie in (0, length]");
    fail_if(!(cfg.step.manakov_factor > 0.0), "propagation.manakov_factor must be positive");
    return std::to_string(static_cast<long>(std::ceil(cfg.fiber.length / cfg.step.dz - 1e-9))) + " steps";
  });
  check("ensemble", [&] {
    fail_if(cfg.runs < 1, "ensemble.runs must be at least 1");
    return std::to_string(cfg.runs) + " runs";
  });
  check("sources in grid", [&] {
    const auto g = cfg.grid();
    const auto triple = jones_triple(cfg.pcase);
    if (cfg.pump1.enabled) make_source(source_spec(cfg.pump1, triple.pump1, cfg.pump1.power, 0), g);
    if (cfg.pump2.enabled) make_source(source_spec(cfg.pump2, triple.pump2, cfg.pump2.power, 0), g);
    if (cfg.signal.enabled) make_source(source_spec(cfg.signal, triple.signal, cfg.signal.power, 0), g);
    return std::string("carriers representable");
  });
  check("mixing products in grid", [&] {
    const auto g = cfg.grid();
    for (double l : {bs_idler_of(cfg), dfwm_idler_of(cfg)}) {
      const double off = g.offset_of_wavelength(l);
      fail_if(!g.contains_offset(off - cfg.band_halfwidth) || !g.contains_offset(off + cfg.band_halfwidth),
              "idler band at " + format_double(l / units::nm) + " nm outside grid");
    }
    return "BS idler " + format_double(bs_idler_of(cfg) / units::nm) + " nm, DFWM idler " +
           format_double(dfwm_idler_of(cfg) / units::nm) + " nm";
  });
  check("dispersion window", [&] {
    const auto m = mixing_terms(cfg, true, true);
    return "dbeta_bs L = " + format_double(m.delta_beta_bs * cfg.fiber.length) + " rad";
  });
  check("raman response", [&] {
    const auto r = build_response(cfg.raman_params());
    const auto g = gain_at(r, cfg.fiber.gamma, 1.0, 1.0 * units::THz);
    const auto gm = gain_at(r, cfg.fiber.gamma, 1.0, -1.0 * units::THz);
    fail_if(std::abs(g.parallel() + gm.parallel()) > 1e-12 * std::abs(g.parallel()), "gain is not odd in detuning");
    return "R_perp/R_par(1 THz) = " + format_double(g.perpendicular() / g.parallel());
  });
  check("temperature", [&] {
    fail_if(!(cfg.temperature > 0.0), "raman.temperature_k must be positive");
    return format_double(cfg.temperature) + " K";
  });
  check("coupling", [&] {
    const auto c = coupling_for(cfg.pcase);
    return "bs_factor = " + format_double(c.bs_factor) + ", dfwm " + (c.dfwm_active() ? "on" : "off");
  });
  check("detector", [&] {
    cfg.detector.validate();
    return "dark rate = " + format_double(counts_per_second(click_probability(0.0, cfg.detector), cfg.detector)) + " /s";
  });
  check("filter chains", [&] {
    const auto ch = counting_channels(cfg);
    return "signal arm insertion " + format_double(ch[0].chain.insertion_loss_db()) + " dB, rejection " +
           format_double(ch[0].chain.composite_rejection_db()) + " dB";
  });
  check("analysis band", [&] {
    fail_if(!(cfg.band_halfwidth > 0.0), "analysis.band_halfwidth_ghz must be positive");
    return format_double(cfg.band_halfwidth / units::GHz) + " GHz";
  });
  return out;
}

}  // namespace fwmlab
