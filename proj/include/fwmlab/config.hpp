#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fwmlab/csv.hpp"
#include "fwmlab/detection.hpp"
#include "fwmlab/fiber.hpp"
#include "fwmlab/grid.hpp"
#include "fwmlab/polarization.hpp"
#include "fwmlab/propagation.hpp"
#include "fwmlab/raman.hpp"
#include "fwmlab/sources.hpp"

namespace fwmlab {

struct SourceConfig {
  bool enabled = true;
  SourceKind kind = SourceKind::cw;
  double power = 0.0;       // W
  double wavelength = 0.0;  // m
  double bandwidth = 0.0;   // Hz
  SpectralProfile profile = SpectralProfile::gaussian;
};

/// Named attenuations outside the filter chains.
struct LossBudget {
  double signal_attenuator_db = 25.6;  // ECL attenuator, counting runs only
  double tap_db = 13.0;                // 5/95 tap coupler, signal path
  double signal_channel_db = 18.0;     // attenuator in front of the signal counter
};

/// Output arm: splitter, wideband filter, tunable filter. Shared by both channels.
struct ChannelFilters {
  double splitter_db = 3.0;
  double wide_bandwidth = 100.0 * units::GHz;
  double wide_insertion_db = 3.0;
  double wide_rejection_db = 60.0;
  double tunable_bandwidth = 100.0 * units::GHz;
  double tunable_insertion_db = 3.0;
  double tunable_rejection_db = 40.0;
};

enum class CountingPath { analytic, ssfm };

struct RamanScanConfig {
  double pump_power = 1.1 * units::mW;
  double pump_wavelength = 1540.7 * units::nm;
  double max_detuning = 15.0 * units::THz;
  double step = 0.05 * units::THz;
};

/// Every field defaults to the experimental setup, so an empty file reproduces it.
struct ScenarioConfig {
  std::size_t grid_points = std::size_t{1} << 17;
  double time_window = 16.0 * units::ns;
  double reference_wavelength = 1545.0 * units::nm;

  FiberSpec fiber;
  RamanParams raman;
  double temperature = 300.0;

  SourceConfig pump1{true, SourceKind::ifsfl, 22.0 * units::mW, 1540.7 * units::nm, 44.0 * units::GHz};
  SourceConfig pump2{true, SourceKind::ifsfl, 15.0 * units::mW, 1563.9 * units::nm, 50.0 * units::GHz};
  SourceConfig signal{true, SourceKind::cw, 5.0 * units::mW, 1549.2 * units::nm, 0.0};
  PolarizationCase pcase = PolarizationCase::A;

  LossBudget loss;
  ChannelFilters filters;
  DetectorSpec detector;

  int runs = 20;
  std::uint64_t base_seed = 1545;
  unsigned threads = 0;

  StepConfig step;
  double band_halfwidth = 150.0 * units::GHz;
  CountingPath counting_path = CountingPath::analytic;
  bool xpm_mismatch = false;

  RamanScanConfig raman_scan;

  TimeFrequencyGrid grid() const { return {grid_points, time_window, reference_wavelength}; }

  /// Raman parameters with the fraction taken from the fiber.
  RamanParams raman_params() const {
    RamanParams p = raman;
    p.raman_fraction = fiber.raman_fraction;
    return p;
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  const auto s = lower(v);
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw ConfigError("cannot parse '" + v + "' as a boolean for " + key);
}

inline std::uint64_t parse_uint(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("cannot parse '" + v + "' as a non-negative integer for " + key);
  return out;
}

inline std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace detail

/// One configuration key: parser into the scenario and printer back to text.
struct ConfigKey {
  std::string name;
  std::string unit;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

namespace detail {

inline ConfigKey number_key(std::string name, std::string unit, double scale,
                            std::function<double&(ScenarioConfig&)> ref) {
  ConfigKey k;
  k.name = name;
  k.unit = std::move(unit);
  k.set = [ref, scale, name](ScenarioConfig& c, const std::string& v) { ref(c) = parse_double(v, name) * scale; };
  k.get = [ref, scale](const ScenarioConfig& c) {
    return format_double(ref(const_cast<ScenarioConfig&>(c)) / scale);
  };
  return k;
}

inline ConfigKey bool_key(std::string name, std::function<bool&(ScenarioConfig&)> ref) {
  ConfigKey k;
  k.name = name;
  k.unit = "bool";
  k.set = [ref, name](ScenarioConfig& c, const std::string& v) { ref(c) = parse_bool(v, name); };
  k.get = [ref](const ScenarioConfig& c) { return bool_str(ref(const_cast<ScenarioConfig&>(c))); };
  return k;
}

inline void add_source_keys(std::vector<ConfigKey>& keys, const std::string& prefix,
                            SourceConfig ScenarioConfig::*member) {
  auto src = [member](ScenarioConfig& c) -> SourceConfig& { return c.*member; };
  keys.push_back(bool_key(prefix + ".enabled", [src](ScenarioConfig& c) -> bool& { return src(c).enabled; }));
  ConfigKey kind;
  kind.name = prefix + ".kind";
  kind.unit = "cw|ifsfl";
  kind.set = [src, n = kind.name](ScenarioConfig& c, const std::string& v) {
    const auto s = lower(v);
    if (s == "cw") src(c).kind = SourceKind::cw;
    else if (s == "ifsfl") src(c).kind = SourceKind::ifsfl;
    else throw ConfigError("unknown source kind '" + v + "' for " + n);
  };
  kind.get = [src](const ScenarioConfig& c) {
    return std::string(src(const_cast<ScenarioConfig&>(c)).kind == SourceKind::cw ? "cw" : "ifsfl");
  };
  keys.push_back(kind);
  keys.push_back(number_key(prefix + ".power_mw", "mW", units::mW,
                            [src](ScenarioConfig& c) -> double& { return src(c).power; }));
  keys.push_back(number_key(prefix + ".wavelength_nm", "nm", units::nm,
                            [src](ScenarioConfig& c) -> double& { return src(c).wavelength; }));
  keys.push_back(number_key(prefix + ".bandwidth_ghz", "GHz", units::GHz,
                            [src](ScenarioConfig& c) -> double& { return src(c).bandwidth; }));
  ConfigKey prof;
  prof.name = prefix + ".profile";
  prof.unit = "gaussian|flat_top";
  prof.set = [src, n = prof.name](ScenarioConfig& c, const std::string& v) {
    const auto s = lower(v);
    if (s == "gaussian") src(c).profile = SpectralProfile::gaussian;
    else if (s == "flat_top" || s == "flat-top") src(c).profile = SpectralProfile::flat_top;
    else throw ConfigError("unknown spectral profile '" + v + "' for " + n);
  };
  prof.get = [src](const ScenarioConfig& c) {
    return std::string(src(const_cast<ScenarioConfig&>(c)).profile == SpectralProfile::gaussian ? "gaussian"
                                                                                                  : "flat_top");
  };
  keys.push_back(prof);
}

inline std::vector<ConfigKey> build_registry() {
  using C = ScenarioConfig;
  std::vector<ConfigKey> k;
  auto num = [&k](std::string name, std::string unit, double scale, std::function<double&(C&)> ref) {
    k.push_back(number_key(std::move(name), std::move(unit), scale, std::move(ref)));
  };

  ConfigKey pts;
  pts.name = "grid.n_points";
  pts.unit = "count";
  pts.set = [](C& c, const std::string& v) { c.grid_points = parse_uint(v, "grid.n_points"); };
  pts.get = [](const C& c) { return std::to_string(c.grid_points); };
  k.push_back(pts);
  num("grid.time_window_ns", "ns", units::ns, [](C& c) -> double& { return c.time_window; });
  num("grid.reference_nm", "nm", units::nm, [](C& c) -> double& { return c.reference_wavelength; });

  num("fiber.length_m", "m", 1.0, [](C& c) -> double& { return c.fiber.length; });
  num("fiber.zdw_nm", "nm", units::nm, [](C& c) -> double& { return c.fiber.zdw; });
  num("fiber.slope_ps_per_km_nm2", "ps/(km nm^2)", units::ps_per_km_nm2,
      [](C& c) -> double& { return c.fiber.dispersion_slope; });
  num("fiber.gamma_per_w_km", "1/(W km)", units::per_w_km, [](C& c) -> double& { return c.fiber.gamma; });
  num("fiber.loss_db_per_km", "dB/km", 1.0, [](C& c) -> double& { return c.fiber.loss_db_per_km; });

  num("raman.fraction", "", 1.0, [](C& c) -> double& { return c.fiber.raman_fraction; });
  num("raman.f_a", "", 1.0, [](C& c) -> double& { return c.raman.f_a; });
  num("raman.f_b", "", 1.0, [](C& c) -> double& { return c.raman.f_b; });
  num("raman.f_c", "", 1.0, [](C& c) -> double& { return c.raman.f_c; });
  num("raman.tau1_fs", "fs", units::fs, [](C& c) -> double& { return c.raman.tau1; });
  num("raman.tau2_fs", "fs", units::fs, [](C& c) -> double& { return c.raman.tau2; });
  num("raman.tau_b_fs", "fs", units::fs, [](C& c) -> double& { return c.raman.tau_b; });
  num("raman.temperature_k", "K", 1.0, [](C& c) -> double& { return c.temperature; });

  add_source_keys(k, "pump1", &C::pump1);
  add_source_keys(k, "pump2", &C::pump2);
  add_source_keys(k, "signal", &C::signal);

  ConfigKey cs;
  cs.name = "case";
  cs.unit = "A|B|C|D";
  cs.set = [](C& c, const std::string& v) { c.pcase = parse_case(v); };
  cs.get = [](const C& c) { return to_string(c.pcase); };
  k.push_back(cs);

  num("loss.signal_attenuator_db", "dB", 1.0, [](C& c) -> double& { return c.loss.signal_attenuator_db; });
  num("loss.tap_db", "dB", 1.0, [](C& c) -> double& { return c.loss.tap_db; });
  num("loss.signal_channel_db", "dB", 1.0, [](C& c) -> double& { return c.loss.signal_channel_db; });

  num("filters.splitter_db", "dB", 1.0, [](C& c) -> double& { return c.filters.splitter_db; });
  num("filters.wide_bandwidth_ghz", "GHz", units::GHz, [](C& c) -> double& { return c.filters.wide_bandwidth; });
  num("filters.wide_insertion_db", "dB", 1.0, [](C& c) -> double& { return c.filters.wide_insertion_db; });
  num("filters.wide_rejection_db", "dB", 1.0, [](C& c) -> double& { return c.filters.wide_rejection_db; });
  num("filters.tunable_bandwidth_ghz", "GHz", units::GHz,
      [](C& c) -> double& { return c.filters.tunable_bandwidth; });
  num("filters.tunable_insertion_db", "dB", 1.0, [](C& c) -> double& { return c.filters.tunable_insertion_db; });
  num("filters.tunable_rejection_db", "dB", 1.0, [](C& c) -> double& { return c.filters.tunable_rejection_db; });

  num("detector.efficiency", "", 1.0, [](C& c) -> double& { return c.detector.efficiency; });
  num("detector.gate_ns", "ns", units::ns, [](C& c) -> double& { return c.detector.gate; });
  num("detector.trigger_hz", "Hz", 1.0, [](C& c) -> double& { return c.detector.trigger_rate; });
  num("detector.dark_per_ns", "1/ns", 1.0, [](C& c) -> double& { return c.detector.dark_prob_per_ns; });

  ConfigKey runs;
  runs.name = "ensemble.runs";
  runs.unit = "count";
  runs.set = [](C& c, const std::string& v) {
    const auto n = parse_uint(v, "ensemble.runs");
    if (n < 1 || n > 100000) throw ConfigError("ensemble.runs must lie in [1, 100000]");
    c.runs = static_cast<int>(n);
  };
  runs.get = [](const C& c) { return std::to_string(c.runs); };
  k.push_back(runs);
  ConfigKey seed;
  seed.name = "ensemble.base_seed";
  seed.unit = "integer";
  seed.set = [](C& c, const std::string& v) { c.base_seed = parse_uint(v, "ensemble.base_seed"); };
  seed.get = [](const C& c) { return std::to_string(c.base_seed); };
  k.push_back(seed);
  ConfigKey thr;
  thr.name = "ensemble.threads";
  thr.unit = "count, 0 = all cores";
  thr.set = [](C& c, const std::string& v) { c.threads = static_cast<unsigned>(parse_uint(v, "ensemble.threads")); };
  thr.get = [](const C& c) { return std::to_string(c.threads); };
  k.push_back(thr);

  num("propagation.dz_m", "m", 1.0, [](C& c) -> double& { return c.step.dz; });
  k.push_back(bool_key("propagation.raman", [](C& c) -> bool& { return c.step.include_raman; }));
  k.push_back(bool_key("propagation.loss", [](C& c) -> bool& { return c.step.loss_on; }));
  num("propagation.manakov_factor", "", 1.0, [](C& c) -> double& { return c.step.manakov_factor; });

  num("analysis.band_halfwidth_ghz", "GHz", units::GHz, [](C& c) -> double& { return c.band_halfwidth; });
  k.push_back(bool_key("analysis.xpm_mismatch", [](C& c) -> bool& { return c.xpm_mismatch; }));

  ConfigKey path;
  path.name = "counting.path";
  path.unit = "analytic|ssfm";
  path.set = [](C& c, const std::string& v) {
    const auto s = detail::lower(v);
    if (s == "analytic") c.counting_path = CountingPath::analytic;
    else if (s == "ssfm") c.counting_path = CountingPath::ssfm;
    else throw ConfigError("unknown counting path '" + v + "' for counting.path");
  };
  path.get = [](const C& c) { return std::string(c.counting_path == CountingPath::analytic ? "analytic" : "ssfm"); };
  k.push_back(path);

  num("raman_scan.pump_power_mw", "mW", units::mW, [](C& c) -> double& { return c.raman_scan.pump_power; });
  num("raman_scan.pump_nm", "nm", units::nm, [](C& c) -> double& { return c.raman_scan.pump_wavelength; });
  num("raman_scan.max_detuning_thz", "THz", units::THz, [](C& c) -> double& { return c.raman_scan.max_detuning; });
  num("raman_scan.step_thz", "THz", units::THz, [](C& c) -> double& { return c.raman_scan.step; });
  return k;
}

}  // namespace detail

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = detail::build_registry();
  return keys;
}

inline const ConfigKey& find_config_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (k.name == name) return k;
  throw ConfigError("unknown configuration key '" + name + "'");
}

inline void set_config_value(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
  find_config_key(key).set(cfg, value);
}

/// All keys in registry order with their current values.
inline std::vector<std::pair<std::string, std::string>> config_values(const ScenarioConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

/// Reads "key = value" lines. '#' starts a comment; blank lines are ignored.
inline void apply_config_stream(ScenarioConfig& cfg, std::istream& in, const std::string& origin = "<stream>") {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  apply_config_stream(cfg, in);
  return cfg;
}

inline ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open configuration file '" + path + "'");
  ScenarioConfig cfg;
  apply_config_stream(cfg, f, path);
  return cfg;
}

inline std::string env_name_for(const std::string& key) {
  std::string s = "FWMLAB_";
  for (char ch : key) s += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

/// FWMLAB_<KEY> overrides (dots become underscores), plus the short forms
/// FWMLAB_SEED, FWMLAB_RUNS and FWMLAB_THREADS.
inline std::vector<std::string> apply_env_overrides(ScenarioConfig& cfg) {
  std::vector<std::string> applied;
  auto apply = [&](const std::string& env, const std::string& key) {
    if (const char* v = std::getenv(env.c_str())) {
      try {
        set_config_value(cfg, key, detail::trim(v));
      } catch (const ConfigError& e) {
        throw ConfigError(env + ": " + e.what());
      }
      applied.push_back(env);
    }
  };
  for (const auto& k : config_keys()) apply(env_name_for(k.name), k.name);
  apply("FWMLAB_SEED", "ensemble.base_seed");
  apply("FWMLAB_RUNS", "ensemble.runs");
  apply("FWMLAB_THREADS", "ensemble.threads");
  return applied;
}

}  // namespace fwmlab
