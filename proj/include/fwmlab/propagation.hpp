#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fwmlab/fiber.hpp"
#include "fwmlab/field.hpp"
#include "fwmlab/raman.hpp"
#include "fwmlab/spectrum.hpp"

namespace fwmlab {

struct StepConfig {
  double dz = 0.5;  // m
  bool include_raman = false;
  bool loss_on = false;
  /// Multiplies gamma in the nonlinear operator (8/9 for sensitivity studies).
  double manakov_factor = 1.0;
};

/// Symmetric split-step integrator for the two-component (Manakov) envelope equation
///
///   dA_j/dz = i beta2/2 d_t^2 A_j + beta3/6 d_t^3 A_j
///             + i gamma [ (1 - f_R)(|Ax|^2 + |Ay|^2) A_j + f_R (Raman terms) ]
///
/// with the Raman terms, for j = x (and x <-> y):
///   A_x (R_a * I) + A_x (R_b * |A_x|^2) + A_y (R_b * Re(A_x conj(A_y)))
///
/// Envelopes follow the exp(+2 pi i f t) convention of PolarizedField, so every phase
/// factor below is the complex conjugate of its textbook form.
class Propagator {
 public:
  Propagator(TimeFrequencyGrid grid, FiberSpec fiber, StepConfig cfg, std::optional<RamanResponse> raman = {})
      : grid_(grid), fiber_(fiber), cfg_(cfg), fft_(grid.size()) {
    fiber_.validate();
    if (!(cfg_.dz > 0.0) || cfg_.dz > fiber_.length * (1.0 + 1e-12))
      throw DomainError("step size must satisfy 0 < dz <= fiber length");
    if (!(cfg_.manakov_factor > 0.0)) throw DomainError("manakov_factor must be positive");
    beta2_ = dispersion_at(grid_.reference_wavelength(), fiber_).beta2;
    beta3_ = beta3_at(grid_.reference_wavelength(), fiber_);
    if (cfg_.include_raman) {
      if (!raman) {
        RamanParams p;
        p.raman_fraction = fiber_.raman_fraction;
        raman = build_response(p);
      }
      kernels_ = sample_kernels(*raman, grid_);
      const auto n = grid_.size();
      u_.resize(n);
      v_.resize(n);
      w1_.resize(n);
      w2_.resize(n);
    }
  }

  const TimeFrequencyGrid& grid() const { return grid_; }
  const FiberSpec& fiber() const { return fiber_; }
  const StepConfig& config() const { return cfg_; }

  /// Dispersion (and loss if enabled) over length h, applied in the frequency domain.
  void linear_step(PolarizedField& f, double h) {
    if (h == 0.0) return;
    const CVector& phase = linear_operator(h);
    for (CVector* comp : {&f.ax(), &f.ay()}) {
      fft_.forward(*comp);
      cplx* a = comp->data();
      for (std::size_t k = 0; k < phase.size(); ++k) a[k] = mul(a[k], phase[k]);
      fft_.backward(*comp);
    }
  }

  /// Kerr (and optional Raman) action over length h, in the time domain.
  /// Returns the summed intensity, which the step leaves unchanged.
  double nonlinear_step(PolarizedField& f, double h) {
    const double g = fiber_.gamma * cfg_.manakov_factor * h;
    auto& ax = f.ax();
    auto& ay = f.ay();
    const std::size_t n = ax.size();
    double total = 0.0;
    if (g == 0.0) {
      for (std::size_t i = 0; i < n; ++i) total += std::norm(ax[i]) + std::norm(ay[i]);
      return total;
    }
    if (!cfg_.include_raman) {
      // Pure phase rotation: |Ax|^2 + |Ay|^2 is invariant pointwise.
      cplx* px = ax.data();
      cplx* py = ay.data();
      for (std::size_t i = 0; i < n; ++i) {
        const double intensity = std::norm(px[i]) + std::norm(py[i]);
        total += intensity;
        const double phi = -g * intensity;
        const cplx rot(std::cos(phi), std::sin(phi));
        px[i] = mul(px[i], rot);
        py[i] = mul(py[i], rot);
      }
      return total;
    }
    raman_convolutions(f);
    const double fr = fiber_.raman_fraction;
    for (std::size_t i = 0; i < n; ++i) {
      const double ix = std::norm(ax[i]);
      const double iy = std::norm(ay[i]);
      const double kerr = (1.0 - fr) * (ix + iy);
      const double mxx = kerr + fr * (w2_[i].real() + w1_[i].real());
      const double myy = kerr + fr * (w2_[i].real() + w1_[i].imag());
      const double mxy = fr * w2_[i].imag();
      // exp(-i g M) for real symmetric M = m I + [[d, q], [q, -d]].
      const double m = 0.5 * (mxx + myy);
      const double d = 0.5 * (mxx - myy);
      const double r = std::hypot(d, mxy);
      const double c = std::cos(g * r);
      const double s_over_r = r > 0.0 ? std::sin(g * r) / r : g;
      const cplx common(std::cos(g * m), -std::sin(g * m));
      const double sd = s_over_r * d;
      const cplx e00 = mul(common, cplx(c, -sd));
      const cplx e11 = mul(common, cplx(c, sd));
      const cplx e01 = mul(common, cplx(0.0, -s_over_r * mxy));
      const cplx x = ax[i];
      const cplx y = ay[i];
      ax[i] = mul(e00, x) + mul(e01, y);
      ay[i] = mul(e01, x) + mul(e11, y);
      total += ix + iy;
    }
    return total;
  }

  /// Strang-split integration over the full fiber length. Adjacent linear half steps are merged.
  PolarizedField propagate(PolarizedField f) {
    if (!(f.grid() == grid_)) throw std::invalid_argument("field grid does not match propagator grid");
    const double length = fiber_.length;
    auto n_full = static_cast<std::size_t>(std::floor(length / cfg_.dz * (1.0 + 1e-12)));
    std::vector<double> steps(n_full, cfg_.dz);
    const double rest = length - static_cast<double>(n_full) * cfg_.dz;
    if (rest > 1e-9 * length) steps.push_back(rest);

    double pending = 0.5 * steps.front();
    for (std::size_t j = 0; j < steps.size(); ++j) {
      linear_step(f, pending);
      if (!std::isfinite(nonlinear_step(f, steps[j])))
        throw NumericError("non-finite field encountered at split step " + std::to_string(j));
      pending = 0.5 * steps[j] + (j + 1 < steps.size() ? 0.5 * steps[j + 1] : 0.0);
    }
    linear_step(f, pending);
    check_finite(f, steps.size());
    return f;
  }

  std::size_t step_count() const {
    const auto n_full = static_cast<std::size_t>(std::floor(fiber_.length / cfg_.dz * (1.0 + 1e-12)));
    const double rest = fiber_.length - static_cast<double>(n_full) * cfg_.dz;
    return n_full + (rest > 1e-9 * fiber_.length ? 1 : 0);
  }

 private:
  const CVector& linear_operator(double h) {
    auto it = linear_cache_.find(h);
    if (it != linear_cache_.end()) return it->second;
    CVector op(grid_.size());
    // 1/N of the inverse transform folded in.
    const double amp = (cfg_.loss_on ? std::exp(-0.5 * fiber_.alpha() * h) : 1.0) / static_cast<double>(grid_.size());
    for (std::size_t k = 0; k < op.size(); ++k) {
      const double w = grid_.angular_offset(k);
      const double beta = 0.5 * beta2_ * w * w + beta3_ / 6.0 * w * w * w;
      op[k] = std::polar(amp, -beta * h);
    }
    return linear_cache_.emplace(h, std::move(op)).first->second;
  }

  // Fills w1 = (R_b*|Ax|^2) + i (R_b*|Ay|^2) and w2 = (R_a*I) + i (R_b*Re(Ax conj Ay)).
  void raman_convolutions(const PolarizedField& f) {
    const auto& ax = f.ax();
    const auto& ay = f.ay();
    const std::size_t n = ax.size();
    for (std::size_t i = 0; i < n; ++i) {
      u_[i] = cplx(std::norm(ax[i]), std::norm(ay[i]));
      v_[i] = cplx(ax[i].real() * ay[i].real() + ax[i].imag() * ay[i].imag(), 0.0);
    }
    fft_.forward(u_);
    fft_.forward(v_);
    const auto& ka = kernels_.isotropic;
    const auto& kb = kernels_.anisotropic;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx uk = u_[k];
      const cplx um = std::conj(u_[(n - k) % n]);
      const cplx diff = uk - um;
      const cplx total = 0.5 * (uk + um) + cplx(0.5 * diff.imag(), -0.5 * diff.real());  // X_k + Y_k
      const cplx kv = mul(kb[k], v_[k]);
      w1_[k] = mul(kb[k], uk);
      w2_[k] = mul(ka[k], total) + cplx(-kv.imag(), kv.real());
    }
    fft_.inverse(w1_);
    fft_.inverse(w2_);
  }

  // Complex product without the C99 infinity recovery of operator*, which blocks vectorization.
  static cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
  }

  static void check_finite(const PolarizedField& f, std::size_t step) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f.ax()[i]) + std::norm(f.ay()[i]);
    if (!std::isfinite(s))
      throw NumericError("non-finite field encountered at split step " + std::to_string(step));
  }

  TimeFrequencyGrid grid_;
  FiberSpec fiber_;
  StepConfig cfg_;
  Fft fft_;
  double beta2_ = 0.0;
  double beta3_ = 0.0;
  GridRamanKernels kernels_;
  CVector u_, v_, w1_, w2_;
  std::map<double, CVector> linear_cache_;
};

/// Dispersive propagation over dz as a standalone operation.
inline PolarizedField linear_step(PolarizedField f, const FiberSpec& fiber, double dz, bool loss_on = false) {
  if (dz == 0.0) return f;
  StepConfig cfg;
  cfg.dz = std::min(std::abs(dz), fiber.length);
  cfg.loss_on = loss_on;
  Propagator p(f.grid(), fiber, cfg);
  p.linear_step(f, dz);
  return f;
}

/// Nonlinear action over dz as a standalone operation.
inline PolarizedField nonlinear_step(PolarizedField f, const FiberSpec& fiber, double dz, bool include_raman,
                                     std::optional<RamanResponse> raman = {}) {
  if (dz == 0.0) return f;
  StepConfig cfg;
  cfg.dz = std::min(std::abs(dz), fiber.length);
  cfg.include_raman = include_raman;
  Propagator p(f.grid(), fiber, cfg, std::move(raman));
  p.nonlinear_step(f, dz);
  return f;
}

inline PolarizedField propagate(PolarizedField f, const FiberSpec& fiber, const StepConfig& cfg,
                                std::optional<RamanResponse> raman = {}) {
  Propagator p(f.grid(), fiber, cfg, std::move(raman));
  return p.propagate(std::move(f));
}

/// Builds the input field of ensemble member run_index.
using InputFactory = std::function<PolarizedField(int run_index)>;

/// Mean output periodogram over n_runs independent inputs. Runs may execute on several
/// threads; the mean is accumulated in run order so the result does not depend on scheduling.
inline AveragedSpectrum ensemble_spectrum(const InputFactory& make_input, const TimeFrequencyGrid& grid,
                                          const FiberSpec& fiber, const StepConfig& cfg, int n_runs,
                                          std::optional<RamanResponse> raman = {}, unsigned threads = 0) {
  if (n_runs < 1) throw DomainError("ensemble needs at least one run");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_runs));

  std::vector<Periodogram> results(static_cast<std::size_t>(n_runs));
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned t) {
    try {
      Propagator prop(grid, fiber, cfg, raman);
      for (int run = static_cast<int>(t); run < n_runs; run += static_cast<int>(threads)) {
        auto out = prop.propagate(make_input(run));
        results[static_cast<std::size_t>(run)] = periodogram(out);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  RVector sum_x(grid.size(), 0.0), sum_y(grid.size(), 0.0);
  for (const auto& r : results) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      sum_x[k] += r.psd_x[k];
      sum_y[k] += r.psd_y[k];
    }
  }
  return AveragedSpectrum::from_fft_order_sums(grid, sum_x, sum_y, n_runs);
}

}  // namespace fwmlab
