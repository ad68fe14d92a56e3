#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fwmlab/cli.hpp"
#include "support.hpp"

using namespace fwmlab;
namespace fs = std::filesystem;

namespace {

const std::string cli = FWMLAB_CLI_PATH;
const std::string config_dir = FWMLAB_CONFIG_DIR;

// Small grid and one run so CLI propagation finishes in seconds.
const std::string small =
    " --set grid.n_points=8192 --set grid.time_window_ns=1 --runs 1 --threads 1";

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("fwmlab_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

int run(const std::string& args, const std::string& err_path = "/dev/null") {
  const int status = std::system((cli + " " + args + " > /dev/null 2> " + err_path).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

CountReport counts_for(PolarizationCase c) {
  ScenarioConfig cfg;
  cfg.pcase = c;
  return run_counting_experiment(cfg);
}

double idler_mu(const CountReport& r, ToggleCondition c) { return r.at("idler", c).mu_per_gate; }
double idler_clicks(const CountReport& r, ToggleCondition c) { return r.at("idler", c).clicks_per_s; }

class ScopedEnv {
 public:
  ScopedEnv(std::string name, const std::string& value) : name_(std::move(name)) {
    ::setenv(name_.c_str(), value.c_str(), 1);
  }
  ~ScopedEnv() { ::unsetenv(name_.c_str()); }

 private:
  std::string name_;
};

}  // namespace

TEST(Config, EmptyTextGivesSetupDefaults) {
  const auto cfg = parse_config_text("");
  EXPECT_DOUBLE_EQ(cfg.pump1.power, 22e-3);
  EXPECT_DOUBLE_EQ(cfg.pump2.power, 15e-3);
  EXPECT_DOUBLE_EQ(cfg.signal.wavelength, 1549.2e-9);
  EXPECT_DOUBLE_EQ(cfg.fiber.length, 450.0);
  EXPECT_EQ(cfg.grid_points, std::size_t{1} << 17);
  EXPECT_EQ(cfg.runs, 20);
  EXPECT_EQ(cfg.pcase, PolarizationCase::A);
  EXPECT_EQ(cfg.counting_path, CountingPath::analytic);
}

TEST(Config, ParsesValuesWithUnitsAndComments) {
  const auto cfg = parse_config_text("# comment\ncase = c\nfiber.length_m = 400  # trailing\npump1.power_mw=10\n\n");
  EXPECT_EQ(cfg.pcase, PolarizationCase::C);
  EXPECT_DOUBLE_EQ(cfg.fiber.length, 400.0);
  EXPECT_DOUBLE_EQ(cfg.pump1.power, 10e-3);
}

TEST(Config, UnknownKeyErrorNamesTheKey) {
  try {
    parse_config_text("fiber.lenght_m = 400\n");
    FAIL() << "no error raised";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("fiber.lenght_m"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("fiber.length_m 400\n"), ConfigError);
  EXPECT_THROW(parse_config_text("fiber.length_m = abc\n"), ConfigError);
  EXPECT_THROW(parse_config_text("ensemble.runs = 0\n"), ConfigError);
  EXPECT_THROW(parse_config_text("case = E\n"), std::exception);
}

TEST(Config, RoundTripThroughText) {
  auto cfg = parse_config_text("case = D\npump2.power_mw = 12.5\nensemble.base_seed = 99\npropagation.raman = true\n");
  std::string text;
  for (const auto& [k, v] : config_values(cfg)) text += k + " = " + v + "\n";
  const auto back = parse_config_text(text);
  EXPECT_EQ(config_values(back), config_values(cfg));
}

TEST(Config, EnvironmentOverrides) {
  ScopedEnv seed("FWMLAB_SEED", "4242");
  ScopedEnv length("FWMLAB_FIBER_LENGTH_M", "300");
  ScenarioConfig cfg;
  const auto applied = apply_env_overrides(cfg);
  EXPECT_EQ(cfg.base_seed, 4242u);
  EXPECT_DOUBLE_EQ(cfg.fiber.length, 300.0);
  EXPECT_EQ(applied.size(), 2u);
  EXPECT_EQ(env_name_for("pump1.power_mw"), "FWMLAB_PUMP1_POWER_MW");
}

TEST(Config, SampleConfigsLoad) {
  for (const char* c : {"A", "B", "C", "D"}) {
    const auto cfg = load_config_file(config_dir + "/case" + c + ".cfg");
    EXPECT_EQ(to_string(cfg.pcase), c);
    for (const auto& check : validate_scenario(cfg)) EXPECT_TRUE(check.ok) << check.name << ": " << check.detail;
  }
  EXPECT_THROW(load_config_file(config_dir + "/missing.cfg"), ConfigError);
}

TEST(Counting, ReportShapeAndBounds) {
  for (auto c : all_cases) {
    const auto r = counts_for(c);
    ASSERT_EQ(r.rows.size(), 8u);
    for (const auto& row : r.rows) {
      EXPECT_LE(row.clicks_per_s, 1e5);
      EXPECT_GE(row.parts.converted, 0.0);
      EXPECT_GE(row.parts.raman_noise, 0.0);
      EXPECT_GE(row.parts.leakage, 0.0);
      EXPECT_GE(row.parts.dark, 0.0);
      EXPECT_NEAR(row.click_probability, 1.0 - std::exp(-row.parts.total()), 1e-12);
    }
  }
}

TEST(Counting, CaseAIdlerEnhancedByConversion) {
  const auto r = counts_for(PolarizationCase::A);
  const double all = idler_clicks(r, ToggleCondition::all_on);
  EXPECT_GT(all, idler_clicks(r, ToggleCondition::pump1_signal));
  EXPECT_GT(all, idler_clicks(r, ToggleCondition::pump2_signal));
  EXPECT_GT(r.at("idler", ToggleCondition::all_on).parts.converted, 0.0);
}

TEST(Counting, CaseDIdlerIsSumOfNoise) {
  const auto r = counts_for(PolarizationCase::D);
  const double all = idler_clicks(r, ToggleCondition::all_on);
  const double sum = idler_clicks(r, ToggleCondition::pump1_signal) + idler_clicks(r, ToggleCondition::pump2_signal);
  EXPECT_NEAR(all, sum, 0.05 * sum);
  EXPECT_EQ(r.at("idler", ToggleCondition::all_on).parts.converted, 0.0);
}

TEST(Counting, ToggleAdditivityWithoutConversion) {
  const auto r = counts_for(PolarizationCase::D);
  const double expect = idler_mu(r, ToggleCondition::pump1_signal) + idler_mu(r, ToggleCondition::pump2_signal) -
                        idler_mu(r, ToggleCondition::signal_only);
  EXPECT_NEAR(idler_mu(r, ToggleCondition::all_on), expect, 0.05 * expect);
}

TEST(Counting, SignalGainFromP1LossToP2) {
  const auto r = counts_for(PolarizationCase::A);
  const double s = r.at("signal", ToggleCondition::signal_only).clicks_per_s;
  EXPECT_GT(r.at("signal", ToggleCondition::pump1_signal).clicks_per_s, s);
  EXPECT_LT(r.at("signal", ToggleCondition::pump2_signal).clicks_per_s, s);
  EXPECT_LT(r.at("signal", ToggleCondition::all_on).clicks_per_s, r.at("signal", ToggleCondition::pump1_signal).clicks_per_s);
}

TEST(Counting, CaseCBetweenAAndD) {
  const double a = idler_clicks(counts_for(PolarizationCase::A), ToggleCondition::all_on);
  const double c = idler_clicks(counts_for(PolarizationCase::C), ToggleCondition::all_on);
  const double d = idler_clicks(counts_for(PolarizationCase::D), ToggleCondition::all_on);
  EXPECT_GT(a, c);
  EXPECT_GT(c, d);
}

TEST(Counting, DarkOnlyWhenEverythingOff) {
  ScenarioConfig cfg;
  cfg.pump1.enabled = cfg.pump2.enabled = cfg.signal.enabled = false;
  const auto r = run_counting_experiment(cfg);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.mu_per_gate, 0.0);
    EXPECT_NEAR(row.clicks_per_s, 0.675, 1e-9);
  }
}

TEST(Counting, SsfmPathOnSmallGrid) {
  auto cfg = test::small_scenario(PolarizationCase::A, 1);
  cfg.counting_path = CountingPath::ssfm;
  const auto r = run_counting_experiment(cfg);
  ASSERT_EQ(r.rows.size(), 8u);
  for (const auto& row : r.rows) EXPECT_TRUE(std::isfinite(row.clicks_per_s));
  EXPECT_GT(idler_clicks(r, ToggleCondition::all_on), idler_clicks(r, ToggleCondition::pump2_signal));
}

TEST(Spectrum, AllSourcesOffIsZero) {
  auto cfg = test::small_scenario(PolarizationCase::A, 1);
  cfg.pump1.enabled = cfg.pump2.enabled = cfg.signal.enabled = false;
  const auto r = run_spectrum_experiment(cfg);
  for (double v : r.spectrum.psd_total()) EXPECT_EQ(v, 0.0);
}

TEST(Spectrum, BandMarkersAtIdlers) {
  const auto r = run_spectrum_experiment(test::small_scenario(PolarizationCase::A, 1));
  ASSERT_EQ(r.bands.size(), 3u);
  EXPECT_NEAR(r.bands[1].wavelength, 1526.43e-9, 0.01e-9);
  EXPECT_NEAR(r.bands[2].wavelength, 1532.3e-9, 0.1e-9);
  EXPECT_GT(r.bands[1].power, 0.0);
  EXPECT_GT(r.bands[2].power, 0.0);
}

TEST(Cli, SpectrumCsvIsDeterministic) {
  TempDir dir;
  const std::string args = "spectrum --config " + config_dir + "/caseA.cfg" + small;
  ASSERT_EQ(run(args + " --out " + (dir / "a.csv")), 0);
  ASSERT_EQ(run(args + " --out " + (dir / "b.csv")), 0);
  const auto a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  const auto rows = lines_of(a);
  ASSERT_EQ(rows.size(), 8193u);
  EXPECT_EQ(rows[0], "frequency_offset_hz,lambda_nm,psd_total_w_per_hz");
}

TEST(Cli, ManifestRecordsConfigAndSeeds) {
  TempDir dir;
  ASSERT_EQ(run("spectrum --config " + config_dir + "/caseB.cfg" + small + " --seed 77 --out " + (dir / "s.csv")), 0);
  const auto m = nlohmann::json::parse(slurp(dir / "s.csv.manifest.json"));
  EXPECT_EQ(m["command"], "spectrum");
  EXPECT_EQ(m["config"]["case"], "B");
  EXPECT_EQ(m["config"]["ensemble.base_seed"], "77");
  ASSERT_EQ(m["seeds"].size(), 1u);
  EXPECT_EQ(m["seeds"][0]["pump1"], pump_seed(77, 0, 1));
  EXPECT_EQ(m["seeds"][0]["pump2"], pump_seed(77, 0, 2));
  EXPECT_EQ(m["bands"].size(), 3u);
}

TEST(Cli, CountsHasEightRows) {
  TempDir dir;
  ASSERT_EQ(run("counts --config " + config_dir + "/caseD.cfg --out " + (dir / "c.csv")), 0);
  const auto rows = lines_of(slurp(dir / "c.csv"));
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "channel,condition,case,mu_per_gate,clicks_per_s");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(split(rows[i])[2], "D");
  EXPECT_TRUE(fs::exists(dir / "c.csv.manifest.json"));
}

TEST(Cli, BsSweepMonotoneGrid) {
  TempDir dir;
  ASSERT_EQ(run("bs-sweep --signal-nm 1530:1560:0.5 --case A --out " + (dir / "s.csv")), 0);
  const auto rows = lines_of(slurp(dir / "s.csv"));
  ASSERT_EQ(rows.size(), 62u);
  EXPECT_EQ(rows[0], "lambda_s_nm,lambda_i_nm,delta_beta_per_m,eta_db,case");
  double prev = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double l = std::stod(split(rows[i])[0]);
    EXPECT_GT(l, prev);
    prev = l;
  }
}

TEST(Cli, RamanScanColumns) {
  TempDir dir;
  ASSERT_EQ(run("raman-scan --config " + config_dir + "/raman_scan.cfg --out " + (dir / "r.csv")), 0);
  const auto rows = lines_of(slurp(dir / "r.csv"));
  ASSERT_EQ(rows.size(), 601u);
  EXPECT_EQ(rows[0], "detuning_thz,r_parallel,r_perpendicular,ratio");
  const auto first = split(rows[1]);
  const auto last = split(rows.back());
  EXPECT_NEAR(std::stod(first[0]), -15.0, 1e-9);
  EXPECT_NEAR(std::stod(first[1]), -std::stod(last[1]), 1e-12 * std::abs(std::stod(last[1])));
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate --config " + config_dir + "/caseA.cfg"), 0);
  EXPECT_EQ(run("validate --set fiber.zdw_nm=-5"), 2);
}

TEST(Cli, ConfigErrorsExitTwo) {
  TempDir dir;
  const auto err = dir / "err.txt";
  EXPECT_EQ(run("counts --set no.such_key=1 --out -", err), 2);
  EXPECT_NE(slurp(err).find("no.such_key"), std::string::npos);
  EXPECT_EQ(run("counts --config " + (dir / "absent.cfg") + " --out -", err), 2);
  EXPECT_NE(slurp(err).find("absent.cfg"), std::string::npos);
  EXPECT_EQ(run("bogus"), 2);
  EXPECT_EQ(run("spectrum --runs 0 --out -"), 2);
}

TEST(Cli, EnvironmentOverrideReachesManifest) {
  TempDir dir;
  ScopedEnv e("FWMLAB_CASE", "C");
  ASSERT_EQ(run("counts --out " + (dir / "c.csv")), 0);
  const auto m = nlohmann::json::parse(slurp(dir / "c.csv.manifest.json"));
  EXPECT_EQ(m["config"]["case"], "C");
  EXPECT_EQ(m["env_overrides"][0], "FWMLAB_CASE");
}

TEST(Cli, NumericFailureExitsThree) {
  TempDir dir;
  const auto err = dir / "err.txt";
  EXPECT_EQ(run("spectrum" + small + " --set pump1.kind=cw --set pump1.power_mw=3e307 --out " + (dir / "s.csv"), err),
            3);
  EXPECT_NE(slurp(err).find("split step"), std::string::npos);
}
