#pragma once

#include <string_view>

namespace curvedyn {

/// Default guard on |Cos_k(x)| below which Tan_k reports a singularity.
inline constexpr double kDomainEpsilon = 1e-10;

/// Below this value of |kappa| x^2 the kernels switch to a Taylor series in
/// kappa, which is exact at kappa = 0 and avoids the 1/sqrt(kappa) cancellation.
inline constexpr double kSeriesThreshold = 1e-6;

enum class Geometry { spherical, euclidean, hyperbolic };

std::string_view to_string(Geometry g);

/// Constant sectional curvature of the configuration space, in 1/length^2.
/// The value is kept as given; it is never rescaled to {-1, 0, 1}.
class Curvature {
 public:
  /// Throws ConfigError when the value is not finite.
  explicit Curvature(double kappa);

  double value() const noexcept { return kappa_; }
  Geometry geometry() const noexcept;

 private:
  double kappa_;
};

// Curvature-dependent trigonometric kernels.
//
//            | cos(sqrt(k) x)              k > 0
//   Cos_k(x) | 1                           k = 0
//            | cosh(sqrt(-k) x)            k < 0
//
//            | sin(sqrt(k) x) / sqrt(k)    k > 0
//   Sin_k(x) | x                           k = 0
//            | sinh(sqrt(-k) x) / sqrt(-k) k < 0
//
// All are pure and total on finite input except tan_k / d_tan_k, which throw
// DomainSingularity when |Cos_k(x)| < eps.

double cos_k(double kappa, double x);
double sin_k(double kappa, double x);
double tan_k(double kappa, double x, double eps = kDomainEpsilon);

double d_cos_k(double kappa, double x);  // -kappa Sin_k(x)
double d_sin_k(double kappa, double x);  // Cos_k(x)
double d_tan_k(double kappa, double x, double eps = kDomainEpsilon);  // 1/Cos_k^2

/// Inverse of Sin_k on the branch where Cos_k > 0. Requires kappa y^2 <= 1.
double asin_k(double kappa, double y);
/// Inverse of Tan_k on the branch where Cos_k > 0. Requires 1 + kappa y^2 > 0.
double atan_k(double kappa, double y);

}  // namespace curvedyn
