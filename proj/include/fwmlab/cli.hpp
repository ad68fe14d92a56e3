#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fwmlab/config.hpp"
#include "fwmlab/experiment.hpp"

namespace fwmlab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int config = 2;
inline constexpr int numeric = 3;
}  // namespace exit_code

namespace detail {

/// Options shared by every subcommand.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<unsigned> threads;
  std::string pcase;
};

inline void add_common(CLI::App* app, CommonOptions& o, const std::string& default_out) {
  o.out = default_out;
  app->add_option("--config,-c", o.config_path, "key = value configuration file");
  app->add_option("--set", o.sets, "override one key, e.g. --set fiber.length_m=400")->take_all();
  app->add_option("--out,-o", o.out, "output CSV path, '-' for stdout")->capture_default_str();
  app->add_option("--manifest", o.manifest, "run manifest path (default: <out>.manifest.json)");
  app->add_option("--seed", o.seed, "ensemble base seed");
  app->add_option("--runs", o.runs, "ensemble size");
  app->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  app->add_option("--case", o.pcase, "polarization case A-D");
}

/// Defaults, then file, then environment, then command-line overrides.
inline ScenarioConfig resolve_config(const CommonOptions& o, std::vector<std::string>& env_applied) {
  ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : load_config_file(o.config_path);
  env_applied = apply_env_overrides(cfg);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    set_config_value(cfg, detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
  }
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.runs) {
    if (*o.runs < 1) throw ConfigError("--runs must be at least 1");
    cfg.runs = *o.runs;
  }
  if (o.threads) cfg.threads = *o.threads;
  if (!o.pcase.empty()) cfg.pcase = parse_case(o.pcase);
  return cfg;
}

template <class Writer>
void write_output(const std::string& path, Writer&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  auto f = open_output(path);
  write(f);
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline nlohmann::ordered_json manifest_base(const std::string& command, const ScenarioConfig& cfg,
                                            const CommonOptions& o, const std::vector<std::string>& env) {
  nlohmann::ordered_json m;
  m["tool"] = "fwmlab";
  m["command"] = command;
  m["config_file"] = o.config_path;
  m["env_overrides"] = env;
  m["cli_overrides"] = o.sets;
  nlohmann::ordered_json c;
  for (const auto& [k, v] : config_values(cfg)) c[k] = v;
  m["config"] = c;
  m["output"] = o.out;
  return m;
}

inline void write_manifest(const CommonOptions& o, const nlohmann::ordered_json& m) {
  std::string path = o.manifest;
  if (path.empty()) {
    if (o.out == "-") return;
    path = o.out + ".manifest.json";
  }
  auto f = open_output(path);
  f << m.dump(2) << '\n';
}

inline nlohmann::ordered_json number(double v) {
  // JSON has no infinities; keep them readable as strings.
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline nlohmann::ordered_json seeds_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json s = nlohmann::ordered_json::array();
  for (int r = 0; r < cfg.runs; ++r)
    s.push_back({{"run", r}, {"pump1", pump_seed(cfg.base_seed, r, 1)}, {"pump2", pump_seed(cfg.base_seed, r, 2)}});
  return s;
}

inline int cmd_spectrum(const CommonOptions& o, bool raman) {
  std::vector<std::string> env;
  auto cfg = resolve_config(o, env);
  if (raman) cfg.step.include_raman = true;
  const auto r = run_spectrum_experiment(cfg);
  write_output(o.out, [&](std::ostream& os) { write_spectrum_csv(os, r.spectrum); });
  auto m = manifest_base("spectrum", cfg, o, env);
  m["seeds"] = seeds_json(cfg);
  m["signal_input_w"] = r.signal_input_power;
  nlohmann::ordered_json bands = nlohmann::ordered_json::array();
  for (const auto& b : r.bands)
    bands.push_back({{"name", b.name},
                     {"lambda_nm", b.wavelength / units::nm},
                     {"offset_hz", b.offset},
                     {"halfwidth_hz", cfg.band_halfwidth},
                     {"power_w", b.power},
                     {"power_dbm", number(to_db(b.power / units::mW))}});
  m["bands"] = bands;
  m["eta_bs_ssfm_db"] = number(r.eta_ssfm_db);
  m["eta_bs_coupled_mode_db"] = number(r.eta_cm_db);
  write_manifest(o, m);
  std::cerr << "spectrum: case " << to_string(cfg.pcase) << ", " << cfg.runs << " runs, BS idler "
            << format_double(to_db(r.bands[1].power / units::mW)) << " dBm, DFWM idler "
            << format_double(to_db(r.bands[2].power / units::mW)) << " dBm\n";
  return exit_code::ok;
}

inline int cmd_counts(const CommonOptions& o, const std::string& path) {
  std::vector<std::string> env;
  auto cfg = resolve_config(o, env);
  if (!path.empty()) set_config_value(cfg, "counting.path", path);
  const auto r = run_counting_experiment(cfg);
  write_output(o.out, [&](std::ostream& os) { write_counts_csv(os, r); });
  auto m = manifest_base("counts", cfg, o, env);
  if (cfg.counting_path == CountingPath::ssfm) m["seeds"] = seeds_json(cfg);
  m["signal_input_w"] = r.signal_input_power;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"channel", row.channel},
                    {"condition", to_string(row.condition)},
                    {"mu_per_gate", row.mu_per_gate},
                    {"click_probability", row.click_probability},
                    {"clicks_per_s", row.clicks_per_s},
                    {"detected_per_gate",
                     {{"converted", row.parts.converted},
                      {"raman_noise", row.parts.raman_noise},
                      {"leakage", row.parts.leakage},
                      {"dark", row.parts.dark}}}});
  m["rows"] = rows;
  write_manifest(o, m);
  return exit_code::ok;
}

inline int cmd_raman_scan(const CommonOptions& o) {
  std::vector<std::string> env;
  const auto cfg = resolve_config(o, env);
  const auto c = run_raman_scan(cfg);
  write_output(o.out, [&](std::ostream& os) { write_raman_scan_csv(os, c); });
  auto m = manifest_base("raman-scan", cfg, o, env);
  m["points"] = c.detuning.size();
  write_manifest(o, m);
  return exit_code::ok;
}

/// "a:b:step" in nanometers.
inline std::vector<double> parse_range_nm(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= spec.size(); ++i) {
    if (i == spec.size() || spec[i] == ':') {
      parts.push_back(spec.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() == 1) {
    const double v = parse_double(parts[0], "--signal-nm");
    return {v * units::nm};
  }
  if (parts.size() != 3) throw ConfigError("--signal-nm expects first:last:step, got '" + spec + "'");
  const double a = parse_double(parts[0], "--signal-nm");
  const double b = parse_double(parts[1], "--signal-nm");
  const double st = parse_double(parts[2], "--signal-nm");
  auto nm = wavelength_range(a, b, st);
  for (auto& v : nm) v *= units::nm;
  return nm;
}

inline int cmd_bs_sweep(const CommonOptions& o, const std::string& range) {
  std::vector<std::string> env;
  const auto cfg = resolve_config(o, env);
  const auto signals = range.empty() ? std::vector<double>{cfg.signal.wavelength} : parse_range_nm(range);
  const auto rows = run_bs_sweep(cfg, signals);
  write_output(o.out, [&](std::ostream& os) { write_bs_sweep_csv(os, rows); });
  auto m = manifest_base("bs-sweep", cfg, o, env);
  m["signal_range_nm"] = range;
  m["rows"] = rows.size();
  write_manifest(o, m);
  return exit_code::ok;
}

inline int cmd_validate(const CommonOptions& o) {
  std::vector<std::string> env;
  const auto cfg = resolve_config(o, env);
  const auto checks = validate_scenario(cfg);
  bool all_ok = true;
  for (const auto& c : checks) {
    std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all_ok = all_ok && c.ok;
  }
  return all_ok ? exit_code::ok : exit_code::config;
}

}  // namespace detail

/// Entry point of the fwmlab command-line tool. Errors go to stderr; the return value is
/// the process exit status.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Dual-pump four-wave mixing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fwmlab 1.0.0");

  detail::CommonOptions spectrum_o, counts_o, scan_o, sweep_o, validate_o;
  bool raman = false;
  std::string path;
  std::string range;

  auto* spectrum = app.add_subcommand("spectrum", "ensemble-averaged SSFM output spectrum");
  detail::add_common(spectrum, spectrum_o, "spectrum.csv");
  spectrum->add_flag("--raman", raman, "include the Raman response in the propagation");

  auto* counts = app.add_subcommand("counts", "photon counts per channel and toggle condition");
  detail::add_common(counts, counts_o, "counts.csv");
  counts->add_option("--path", path, "analytic or ssfm");

  auto* scan = app.add_subcommand("raman-scan", "parallel and perpendicular Raman gain versus detuning");
  detail::add_common(scan, scan_o, "raman_scan.csv");

  auto* sweep = app.add_subcommand("bs-sweep", "coupled-mode BS efficiency over signal wavelength");
  detail::add_common(sweep, sweep_o, "bs_sweep.csv");
  sweep->add_option("--signal-nm", range, "signal wavelengths first:last:step in nm");

  auto* validate = app.add_subcommand("validate", "check a configuration without propagating");
  detail::add_common(validate, validate_o, "-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cout, std::cerr);
    return rc == 0 ? exit_code::ok : exit_code::config;
  }

  try {
    if (*spectrum) return detail::cmd_spectrum(spectrum_o, raman);
    if (*counts) return detail::cmd_counts(counts_o, path);
    if (*scan) return detail::cmd_raman_scan(scan_o);
    if (*sweep) return detail::cmd_bs_sweep(sweep_o, range);
    if (*validate) return detail::cmd_validate(validate_o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::config;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::config;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return exit_code::numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::internal;
  }
  return exit_code::internal;
}

}  // namespace fwmlab
