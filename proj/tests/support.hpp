#pragma once

#include <cmath>

#include "fwmlab/experiment.hpp"

namespace fwmlab::test {

/// 2^13 points over 1 ns: df = 1 GHz, half-span 4.096 THz.
inline TimeFrequencyGrid small_grid(double reference_nm = 1545.0) {
  return {std::size_t{1} << 13, 1.0 * units::ns, reference_nm * units::nm};
}

/// Scenario on the small grid, short enough for unit tests.
inline ScenarioConfig small_scenario(PolarizationCase c = PolarizationCase::A, int runs = 2) {
  ScenarioConfig cfg;
  cfg.grid_points = std::size_t{1} << 13;
  cfg.time_window = 1.0 * units::ns;
  cfg.pcase = c;
  cfg.runs = runs;
  cfg.threads = 1;
  return cfg;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fwmlab::test
