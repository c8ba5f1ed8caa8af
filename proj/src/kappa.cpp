#include "curvedyn/kappa.hpp"

#include <cmath>
#include <string>

#include "curvedyn/errors.hpp"

namespace curvedyn {

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::spherical:
      return "spherical";
    case Geometry::euclidean:
      return "euclidean";
    case Geometry::hyperbolic:
      return "hyperbolic";
  }
  return "unknown";
}

Curvature::Curvature(double kappa) : kappa_(kappa) {
  if (!std::isfinite(kappa)) {
    throw ConfigError("curvature must be finite, got " + std::to_string(kappa));
  }
}

Geometry Curvature::geometry() const noexcept {
  if (kappa_ > 0.0) return Geometry::spherical;
  if (kappa_ < 0.0) return Geometry::hyperbolic;
  return Geometry::euclidean;
}

namespace {

bool use_series(double kappa, double x) {
  return std::abs(kappa) * x * x < kSeriesThreshold;
}

}  // namespace

double cos_k(double kappa, double x) {
  if (use_series(kappa, x)) {
    const double u = kappa * x * x;
    return 1.0 - u / 2.0 + u * u / 24.0;
  }
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * x);
  return std::cosh(std::sqrt(-kappa) * x);
}

double sin_k(double kappa, double x) {
  if (use_series(kappa, x)) {
    const double u = kappa * x * x;
    return x * (1.0 - u / 6.0 + u * u / 120.0);
  }
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::sin(s * x) / s;
  }
  const double s = std::sqrt(-kappa);
  return std::sinh(s * x) / s;
}

double tan_k(double kappa, double x, double eps) {
  const double c = cos_k(kappa, x);
  if (std::abs(c) < eps) {
    throw DomainSingularity("Tan_k: |Cos_k(x)| below guard at x = " + std::to_string(x) +
                            ", kappa = " + std::to_string(kappa));
  }
  return sin_k(kappa, x) / c;
}

double d_cos_k(double kappa, double x) { return -kappa * sin_k(kappa, x); }

double d_sin_k(double kappa, double x) { return cos_k(kappa, x); }

double d_tan_k(double kappa, double x, double eps) {
  const double c = cos_k(kappa, x);
  if (std::abs(c) < eps) {
    throw DomainSingularity("d Tan_k: |Cos_k(x)| below guard at x = " + std::to_string(x));
  }
  return 1.0 / (c * c);
}

double asin_k(double kappa, double y) {
  if (use_series(kappa, y)) {
    const double u = kappa * y * y;
    return y * (1.0 + u / 6.0 + 3.0 * u * u / 40.0);
  }
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    const double arg = s * y;
    if (std::abs(arg) > 1.0) {
      throw DomainSingularity("asin_k: |sqrt(kappa) y| > 1");
    }
    return std::asin(arg) / s;
  }
  const double s = std::sqrt(-kappa);
  return std::asinh(s * y) / s;
}

double atan_k(double kappa, double y) {
  if (use_series(kappa, y)) {
    const double u = kappa * y * y;
    return y * (1.0 - u / 3.0 + u * u / 5.0);
  }
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::atan(s * y) / s;
  }
  const double s = std::sqrt(-kappa);
  const double arg = s * y;
  if (std::abs(arg) >= 1.0) {
    throw DomainSingularity("atan_k: |sqrt(-kappa) y| >= 1");
  }
  return std::atanh(arg) / s;
}

}  // namespace curvedyn
