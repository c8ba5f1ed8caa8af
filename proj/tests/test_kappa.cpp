#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvedyn/errors.hpp"
#include "curvedyn/kappa.hpp"
#include "curvedyn/sampling.hpp"

using namespace curvedyn;

namespace {

// Reference values computed with 30-digit arithmetic.
constexpr double kCosh1 = 1.5430806348152437;
constexpr double kSinh1 = 1.1752011936438014;
constexpr double kSech2_1 = 0.41997434161402614;
constexpr double kTanh1 = 0.76159415595576489;

}  // namespace

TEST(Kappa, FrozenHyperbolicValues) {
  EXPECT_NEAR(cos_k(-1.0, 1.0), kCosh1, 1e-15);
  EXPECT_NEAR(sin_k(-1.0, 1.0), kSinh1, 1e-15);
  EXPECT_NEAR(tan_k(-1.0, 1.0), kTanh1, 1e-15);
  EXPECT_NEAR(d_tan_k(-1.0, 1.0), kSech2_1, 1e-15);
}

TEST(Kappa, FrozenOtherCurvatures) {
  EXPECT_NEAR(sin_k(0.5, 2.0), 1.3969119972732167, 1e-15);
  EXPECT_NEAR(cos_k(-0.3, 2.0), 1.6624521205607886, 1e-15);
  EXPECT_DOUBLE_EQ(sin_k(0.0, 2.5), 2.5);
  EXPECT_DOUBLE_EQ(cos_k(0.0, 2.5), 1.0);
  EXPECT_DOUBLE_EQ(tan_k(0.0, 2.5), 2.5);
  EXPECT_NEAR(cos_k(1.0, 1.0), std::cos(1.0), 1e-16);
  EXPECT_NEAR(sin_k(4.0, 0.3), std::sin(0.6) / 2.0, 1e-16);
}

TEST(Kappa, PythagoreanIdentityOnRandomPairs) {
  Rng rng(1);
  for (int n = 0; n < 10000; ++n) {
    const double kappa = rng.uniform(-2.0, 2.0);
    const double x = rng.uniform(-5.0, 5.0);
    const double c = cos_k(kappa, x), s = sin_k(kappa, x);
    // Relative to the size of the terms: cosh^2 reaches e^14 here.
    EXPECT_LE(std::abs(c * c + kappa * s * s - 1.0) / std::max(1.0, c * c), 1e-13)
        << "kappa=" << kappa << " x=" << x;
  }
}

TEST(Kappa, ContinuousThroughZeroCurvature) {
  for (double x : {0.1, 0.7, 1.5, 3.0}) {
    for (double kappa : {1e-8, -1e-8}) {
      EXPECT_NEAR(sin_k(kappa, x), x, 1e-6);
      EXPECT_NEAR(cos_k(kappa, x), 1.0, 1e-6);
      EXPECT_NEAR(tan_k(kappa, x), x, 1e-6);
    }
  }
}

TEST(Kappa, SeriesBranchMatchesClosedForm) {
  // Both sides of the series switch |kappa| x^2 = 1e-6.
  for (double kappa : {0.99e-6, 1.01e-6, -0.99e-6, -1.01e-6}) {
    const double sk = std::sqrt(std::abs(kappa));
    const double s = kappa > 0 ? std::sin(sk) / sk : std::sinh(sk) / sk;
    const double c = kappa > 0 ? std::cos(sk) : std::cosh(sk);
    EXPECT_NEAR(sin_k(kappa, 1.0), s, 1e-15);
    EXPECT_NEAR(cos_k(kappa, 1.0), c, 1e-15);
  }
}

TEST(Kappa, DerivativesMatchDifferences) {
  const double h = 1e-6;
  for (double kappa : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    for (double x : {0.2, 0.9, 1.3}) {
      EXPECT_NEAR(d_cos_k(kappa, x), (cos_k(kappa, x + h) - cos_k(kappa, x - h)) / (2 * h), 1e-8);
      EXPECT_NEAR(d_sin_k(kappa, x), (sin_k(kappa, x + h) - sin_k(kappa, x - h)) / (2 * h), 1e-8);
      EXPECT_NEAR(d_tan_k(kappa, x), (tan_k(kappa, x + h) - tan_k(kappa, x - h)) / (2 * h), 1e-7);
    }
  }
}

TEST(Kappa, InverseFunctions) {
  EXPECT_NEAR(asin_k(1.0, 0.5), std::numbers::pi / 6, 1e-15);
  EXPECT_NEAR(asin_k(-1.0, 2.0), 1.4436354751788103, 1e-15);
  EXPECT_NEAR(atan_k(-1.0, 0.5), 0.54930614433405485, 1e-15);
  for (double kappa : {-1.0, -0.3, 0.0, 1e-9, 0.7, 1.0}) {
    for (double x : {0.1, 0.8, 1.2}) {
      EXPECT_NEAR(asin_k(kappa, sin_k(kappa, x)), x, 1e-12);
      EXPECT_NEAR(atan_k(kappa, tan_k(kappa, x)), x, 1e-12);
    }
  }
  EXPECT_THROW(asin_k(1.0, 1.5), DomainSingularity);
  EXPECT_THROW(atan_k(-1.0, 1.0), DomainSingularity);
}

TEST(Kappa, TanGuardAtEquator) {
  EXPECT_THROW(tan_k(1.0, std::numbers::pi / 2), DomainSingularity);
  EXPECT_THROW(d_tan_k(4.0, std::numbers::pi / 4), DomainSingularity);
  EXPECT_NO_THROW(tan_k(1.0, std::numbers::pi / 2 - 1e-6));
}

TEST(Kappa, CurvatureClassification) {
  EXPECT_EQ(Curvature(0.7).geometry(), Geometry::spherical);
  EXPECT_EQ(Curvature(0.0).geometry(), Geometry::euclidean);
  EXPECT_EQ(Curvature(-2.0).geometry(), Geometry::hyperbolic);
  EXPECT_DOUBLE_EQ(Curvature(0.25).value(), 0.25);
  EXPECT_THROW(Curvature(std::nan("")), ConfigError);
  EXPECT_EQ(to_string(Geometry::hyperbolic), "hyperbolic");
}
