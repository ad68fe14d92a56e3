#pragma once

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <stdexcept>
#include <vector>

#include "fwmlab/common.hpp"

namespace fwmlab {

/// Allocator returning FFTW-aligned storage so any buffer can be fed to a shared plan.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() noexcept = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }

  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using CVector = std::vector<cplx, FftwAllocator<cplx>>;
using RVector = std::vector<double>;

namespace detail {

// FFTW planning is not thread-safe; execution with new-array functions is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Plans of one length, created on first use. MEASURE planning of long transforms takes
/// seconds, so variants a caller never executes are never planned.
class FftPlans {
 public:
  enum Kind { forward_out, inverse_out, forward_in, inverse_in };

  explicit FftPlans(std::size_t n) : n_(n) {}
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    for (auto p : plans_)
      if (p) fftw_destroy_plan(p);
  }

  fftw_plan get(Kind kind) const {
    std::lock_guard lock(fftw_planner_mutex());
    auto& p = plans_[kind];
    if (!p) {
      const unsigned flags = n_ >= (std::size_t{1} << 16) ? FFTW_MEASURE : FFTW_ESTIMATE;
      CVector a(n_), b(n_);
      auto* pa = reinterpret_cast<fftw_complex*>(a.data());
      auto* pb = reinterpret_cast<fftw_complex*>(kind == forward_in || kind == inverse_in ? a.data() : b.data());
      const int sign = kind == forward_out || kind == forward_in ? FFTW_FORWARD : FFTW_BACKWARD;
      p = fftw_plan_dft_1d(static_cast<int>(n_), pa, pb, sign, flags);
      if (!p) throw std::runtime_error("FFTW planning failed");
    }
    return p;
  }

 private:
  std::size_t n_;
  mutable fftw_plan plans_[4] = {nullptr, nullptr, nullptr, nullptr};
};

inline std::shared_ptr<const FftPlans> plans_for(std::size_t n) {
  // The mutex must outlive the cache: plan destructors lock it at exit.
  auto& mutex = fftw_planner_mutex();
  static std::map<std::size_t, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plans = std::make_shared<const FftPlans>(n);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace detail

/// Complex 1-D DFT of fixed length.
///
/// forward: X_k = sum_n x_n exp(-2 pi i k n / N)  (unnormalized)
/// inverse: x_n = (1/N) sum_k X_k exp(+2 pi i k n / N)
///
/// Buffers must come from FftwAllocator. In-place calls are allowed.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n), plans_(detail::plans_for(n)) {}

  std::size_t size() const { return n_; }

  void forward(std::span<const cplx> in, std::span<cplx> out) const {
    run(in, out, detail::FftPlans::forward_out, detail::FftPlans::forward_in);
  }

  void inverse(std::span<const cplx> in, std::span<cplx> out) const {
    run(in, out, detail::FftPlans::inverse_out, detail::FftPlans::inverse_in);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) v *= scale;
  }

  void forward(CVector& data) const { forward(data, data); }
  void inverse(CVector& data) const { inverse(data, data); }

  /// Inverse transform without the 1/N factor.
  void backward(CVector& data) const { run(data, data, detail::FftPlans::inverse_out, detail::FftPlans::inverse_in); }

 private:
  void run(std::span<const cplx> in, std::span<cplx> out, detail::FftPlans::Kind out_of_place,
           detail::FftPlans::Kind in_place) const {
    if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("FFT length mismatch");
    auto* pi = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* po = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(plans_->get(pi == po ? in_place : out_of_place), pi, po);
  }

  std::size_t n_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

}  // namespace fwmlab
