#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "fwmlab/common.hpp"

namespace fwmlab {

/// Normalized two-component polarization state on the fixed (x, y) basis.
class JonesVector {
 public:
  JonesVector() : cx_(1.0, 0.0), cy_(0.0, 0.0) {}

  /// Normalizes the pair. Throws on a zero vector.
  JonesVector(cplx cx, cplx cy) {
    const double norm = std::sqrt(std::norm(cx) + std::norm(cy));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("Jones vector must be nonzero and finite");
    cx_ = cx / norm;
    cy_ = cy / norm;
  }

  static JonesVector x() { return {cplx{1.0, 0.0}, cplx{0.0, 0.0}}; }
  static JonesVector y() { return {cplx{0.0, 0.0}, cplx{1.0, 0.0}}; }
  /// Linear polarization at angle theta from x.
  static JonesVector linear(double theta) { return {cplx{std::cos(theta), 0.0}, cplx{std::sin(theta), 0.0}}; }

  cplx cx() const { return cx_; }
  cplx cy() const { return cy_; }

 private:
  cplx cx_;
  cplx cy_;
};

/// <a|b> = conj(a) . b
inline cplx inner(const JonesVector& a, const JonesVector& b) {
  return std::conj(a.cx()) * b.cx() + std::conj(a.cy()) * b.cy();
}

/// |<a|b>|^2, the power fraction of b transmitted by a polarizer along a.
inline double overlap(const JonesVector& a, const JonesVector& b) { return std::norm(inner(a, b)); }

/// Unitary 2x2 acting on (x, y) components.
struct JonesMatrix {
  cplx m00, m01, m10, m11;

  static JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }

  /// General SU(2) element from Euler-type angles.
  static JonesMatrix su2(double alpha, double beta, double gamma) {
    const cplx a = std::polar(std::cos(alpha), beta);
    const cplx b = std::polar(std::sin(alpha), gamma);
    return {a, -std::conj(b), b, std::conj(a)};
  }

  JonesVector operator*(const JonesVector& v) const {
    return {m00 * v.cx() + m01 * v.cy(), m10 * v.cx() + m11 * v.cy()};
  }
};

/// Input arrangements for (P1, P2, S).
enum class PolarizationCase { A, B, C, D };

inline constexpr std::array<PolarizationCase, 4> all_cases{PolarizationCase::A, PolarizationCase::B,
                                                           PolarizationCase::C, PolarizationCase::D};

struct JonesTriple {
  JonesVector pump1;
  JonesVector pump2;
  JonesVector signal;
};

/// A: all x. B: P1 x, P2 and S y. C: pumps x, S y. D: P1 and S x, P2 y.
inline JonesTriple jones_triple(PolarizationCase c) {
  const auto x = JonesVector::x();
  const auto y = JonesVector::y();
  switch (c) {
    case PolarizationCase::A: return {x, x, x};
    case PolarizationCase::B: return {x, y, y};
    case PolarizationCase::C: return {x, x, y};
    case PolarizationCase::D: return {x, y, x};
  }
  throw DomainError("unknown polarization case");
}

inline char to_char(PolarizationCase c) { return static_cast<char>('A' + static_cast<int>(c)); }

inline std::string to_string(PolarizationCase c) { return std::string(1, to_char(c)); }

inline PolarizationCase parse_case(std::string_view s) {
  if (s.size() == 1) {
    switch (s[0]) {
      case 'A': case 'a': return PolarizationCase::A;
      case 'B': case 'b': return PolarizationCase::B;
      case 'C': case 'c': return PolarizationCase::C;
      case 'D': case 'd': return PolarizationCase::D;
      default: break;
    }
  }
  throw ConfigError("polarization case must be one of A, B, C, D (got '" + std::string(s) + "')");
}

}  // namespace fwmlab
