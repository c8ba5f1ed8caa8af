#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "curvedyn/kappa.hpp"

namespace curvedyn {

/// Phase-space coordinate order used by every gradient in the library:
/// (r, theta, phi, p_r, p_theta, p_phi).
inline constexpr std::size_t kPhaseDim = 6;
using Gradient = std::array<double, kPhaseDim>;

/// A phase-space function value together with its exact 6-gradient. Arithmetic
/// on Jets applies the sum, product and quotient rules; the transcendental
/// primitives below take their derivatives from the analytic kernel
/// derivatives, so composite observables carry closed-form gradients.
struct Jet {
  double v = 0.0;
  Gradient d{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT(google-explicit-constructor): constants
  Jet(double value, const Gradient& grad) : v(value), d(grad) {}

  static Jet variable(double value, std::size_t index) {
    Jet j(value);
    j.d[index] = 1.0;
    return j;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (std::size_t i = 0; i < kPhaseDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (std::size_t i = 0; i < kPhaseDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (std::size_t i = 0; i < kPhaseDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (std::size_t i = 0; i < kPhaseDim; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    return *this;
  }
};

inline Jet operator-(Jet a) {
  a *= -1.0;
  return a;
}
inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator/(Jet a, const Jet& b) { return a /= b; }
inline Jet operator+(Jet a, double s) { a.v += s; return a; }
inline Jet operator+(double s, Jet a) { a.v += s; return a; }
inline Jet operator-(Jet a, double s) { a.v -= s; return a; }
inline Jet operator-(double s, const Jet& a) { return s + (-a); }
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
inline Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

/// Applies a scalar function with known value f and derivative df to a Jet.
inline Jet chain(const Jet& a, double f, double df) {
  Jet out(f);
  for (std::size_t i = 0; i < kPhaseDim; ++i) out.d[i] = df * a.d[i];
  return out;
}

inline Jet sqr(const Jet& a) { return chain(a, a.v * a.v, 2.0 * a.v); }
inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s);
}

inline Jet sin_k(double kappa, const Jet& a) {
  return chain(a, curvedyn::sin_k(kappa, a.v), curvedyn::d_sin_k(kappa, a.v));
}
inline Jet cos_k(double kappa, const Jet& a) {
  return chain(a, curvedyn::cos_k(kappa, a.v), curvedyn::d_cos_k(kappa, a.v));
}
inline Jet tan_k(double kappa, const Jet& a, double eps = kDomainEpsilon) {
  return chain(a, curvedyn::tan_k(kappa, a.v, eps), curvedyn::d_tan_k(kappa, a.v, eps));
}

}  // namespace curvedyn
