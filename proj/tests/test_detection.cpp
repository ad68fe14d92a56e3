#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace fwmlab;

namespace {

// Independent photon-count oracle: N = P T lambda / (h c).
double photons_oracle(double power, double lambda, double gate) {
  return power * gate * lambda / (6.62607015e-34 * 299792458.0);
}

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }

AveragedSpectrum flat_spectrum(const TimeFrequencyGrid& g, double psd) {
  return AveragedSpectrum(g, RVector(g.size(), psd), RVector(g.size(), 0.0), 1);
}

}  // namespace

TEST(PhotonNumber, SignalEstimate) {
  const double mu = mean_photons_per_gate(30.8e-9, 1549.2e-9, 2.5e-9);
  EXPECT_NEAR(mu, photons_oracle(30.8e-9, 1549.2e-9, 2.5e-9), 1e-9 * mu);
  EXPECT_NEAR(mu, 600.0, 0.01 * 600.0);
}

TEST(PhotonNumber, IdlerEstimate) {
  const double mu = mean_photons_per_gate(0.257e-9, 1526.43e-9, 2.5e-9);
  EXPECT_NEAR(mu, 5.0, 0.05 * 5.0);
}

TEST(PhotonNumber, LinearInPower) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(0.0, 1e-6), a(0.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const double pw = p(rng), s = a(rng);
    const double base = mean_photons_per_gate(pw, 1549.2e-9, 2.5e-9);
    EXPECT_NEAR(mean_photons_per_gate(s * pw, 1549.2e-9, 2.5e-9), s * base, 1e-12 * s * base + 1e-300);
  }
  EXPECT_THROW(mean_photons_per_gate(-1.0, 1549.2e-9, 2.5e-9), DomainError);
  EXPECT_THROW(mean_photons_per_gate(1.0, 0.0, 2.5e-9), DomainError);
}

TEST(ClickProbability, DarkOnly) {
  DetectorSpec det;
  EXPECT_NEAR(click_probability(0.0, det), 6.75e-6, 1e-18);
  EXPECT_NEAR(counts_per_second(click_probability(0.0, det), det), 0.675, 1e-9);
}

TEST(ClickProbability, FivePhotons) {
  DetectorSpec det;
  const double p = click_probability(5.0, det);
  const double oracle = 1.0 - (1.0 - 6.75e-6) * std::exp(-0.5);
  EXPECT_NEAR(p, oracle, 1e-15);
  EXPECT_NEAR(p, 0.3935, 1e-4);
  EXPECT_NEAR(counts_per_second(p, det), 3.9e4, 0.01 * 3.9e4);
}

TEST(ClickProbability, SaturationAndBounds) {
  DetectorSpec det;
  EXPECT_DOUBLE_EQ(counts_per_second(1.0, det), 1e5);
  EXPECT_THROW(counts_per_second(1.5, det), DomainError);
  EXPECT_THROW(click_probability(-1.0, det), DomainError);
  for (double mu : {0.0, 1.0, 1e3, 1e9}) EXPECT_LE(counts_per_second(click_probability(mu, det), det), det.trigger_rate);
}

TEST(ClickProbability, MonotoneInEveryArgument) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    DetectorSpec a;
    a.efficiency = u(rng);
    a.dark_prob_per_ns = 1e-3 * u(rng);
    const double mu = 20.0 * u(rng);
    const double p = click_probability(mu, a);
    EXPECT_GE(click_probability(mu + u(rng), a), p);
    DetectorSpec b = a;
    b.efficiency = std::min(1.0, a.efficiency + 0.1 * u(rng));
    EXPECT_GE(click_probability(mu, b), p);
    DetectorSpec c = a;
    c.dark_prob_per_ns = a.dark_prob_per_ns + 1e-4 * u(rng);
    EXPECT_GE(click_probability(mu, c), p);
  }
}

TEST(Detector, DarkScalesWithGate) {
  DetectorSpec det;
  det.gate = 5.0 * units::ns;
  EXPECT_NEAR(det.dark_probability(), 2.0 * 6.75e-6, 1e-18);
}

TEST(Detector, Validation) {
  DetectorSpec det;
  EXPECT_NO_THROW(det.validate());
  det.efficiency = 1.5;
  EXPECT_THROW(det.validate(), DomainError);
  det = DetectorSpec{};
  det.gate = 20e-6;
  EXPECT_THROW(det.validate(), DomainError);
  det = DetectorSpec{};
  det.dark_prob_per_ns = -1.0;
  EXPECT_THROW(det.validate(), DomainError);
}

TEST(FilterChain, AttenuatorsCompose) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng), y = u(rng);
    const FilterChain two({FilterElement::attenuator("x", x), FilterElement::attenuator("y", y)});
    const FilterChain one({FilterElement::attenuator("xy", x + y)});
    const double nu = 193e12;
    EXPECT_NEAR(two.transmission(nu), one.transmission(nu), 1e-12 * one.transmission(nu));
  }
}

TEST(FilterChain, PumpLeakageThroughCascadedFilters) {
  const double idler = 1526.43e-9;
  const FilterChain chain({FilterElement::bandpass("wide", idler, 100e9, 0.0, 60.0),
                           FilterElement::bandpass("tunable", idler, 100e9, 0.0, 40.0)});
  EXPECT_DOUBLE_EQ(chain.composite_rejection_db(), 100.0);
  const std::vector<SpectralLine> pump{{frequency_of(1540.7e-9), 22e-3}};
  EXPECT_NEAR(apply_chain(pump, chain), 22e-3 * 1e-10, 1e-24);
}

TEST(FilterChain, InBandLineSeesInsertionLoss) {
  const auto chain = channel_chain(ChannelFilters{}, 1549.2e-9, 18.0);
  const double nu = frequency_of(1549.2e-9);
  EXPECT_TRUE(chain.passes(nu));
  EXPECT_NEAR(chain.transmission(nu), db_to_linear(27.0), 1e-15);
  EXPECT_NEAR(chain.passband_width(), 100e9, 1e-3);
  EXPECT_NEAR(chain.passband_center(), nu, 1e-3);
  EXPECT_FALSE(chain.passes(nu + 60e9));
}

TEST(FilterChain, InfiniteRejectionKeepsInBandOnly) {
  const double inf = std::numeric_limits<double>::infinity();
  const FilterChain chain({FilterElement::bandpass("ideal", 1549.2e-9, 100e9, 3.0, inf)});
  const std::vector<SpectralLine> lines{{frequency_of(1549.2e-9), 1e-6}, {frequency_of(1540.7e-9), 1.0}};
  EXPECT_NEAR(apply_chain(lines, chain), 1e-6 * db_to_linear(3.0), 1e-20);
}

TEST(FilterChain, SpectrumInBandIntegral) {
  const auto g = test::small_grid();
  const double psd = 1e-15;
  const auto s = flat_spectrum(g, psd);
  const double inf = std::numeric_limits<double>::infinity();
  const FilterChain chain({FilterElement::bandpass("ideal", 1549.2e-9, 100e9, 0.0, inf)});
  const double expected = psd * 100e9;
  EXPECT_NEAR(apply_chain(s, chain), expected, 2.0 * psd * g.df());
}

TEST(FilterChain, ChannelOutsideSpanThrows) {
  const auto s = flat_spectrum(test::small_grid(), 1e-15);
  const FilterChain chain({FilterElement::bandpass("far", 1620e-9, 100e9, 0.0, 40.0)});
  EXPECT_THROW(apply_chain(s, chain), DomainError);
}

TEST(FilterChain, RejectsInvalidElements) {
  EXPECT_THROW(FilterChain({FilterElement::attenuator("neg", -1.0)}), DomainError);
  EXPECT_THROW(FilterChain({FilterElement::bandpass("empty", 1549.2e-9, 0.0, 0.0, 10.0)}), DomainError);
}

TEST(LossBudget, ArithmeticOfNamedLosses) {
  ScenarioConfig cfg;
  const double total_db = cfg.loss.signal_attenuator_db + cfg.loss.tap_db + cfg.loss.signal_channel_db +
                          cfg.filters.splitter_db + cfg.filters.wide_insertion_db + cfg.filters.tunable_insertion_db;
  EXPECT_NEAR(total_db, 25.6 + 13.0 + 18.0 + 9.0, 1e-12);
  const double oracle = photons_oracle(5e-3 * db_to_linear(total_db), 1549.2e-9, 2.5e-9);
  const auto ch = counting_channels(cfg)[0];
  const double p = signal_input_power(cfg, true) * ch.chain.transmission(frequency_of(1549.2e-9));
  EXPECT_NEAR(mean_photons_per_gate(p, 1549.2e-9, cfg.detector.gate), oracle, 1e-9 * oracle);
}

TEST(LossBudget, SignalPhotonsNearQuotedEstimate) {
  ScenarioConfig cfg;
  cfg.fiber.loss_db_per_km = 0.0;
  const auto report = run_counting_experiment(cfg);
  const double mu = report.at("signal", ToggleCondition::signal_only).mu_per_gate;
  EXPECT_GE(mu, 300.0);
  EXPECT_LE(mu, 1200.0);
}
