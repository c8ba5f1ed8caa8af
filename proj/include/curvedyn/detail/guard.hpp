#pragma once

#include <cmath>
#include <string>

#include "curvedyn/errors.hpp"
#include "curvedyn/kappa.hpp"

namespace curvedyn::detail {

/// Returns value unchanged, or throws DomainSingularity if it is too close to
/// zero to be used as a denominator.
inline double nonzero(double value, const char* what, double eps = kDomainEpsilon) {
  if (!(std::abs(value) >= eps)) {
    throw DomainSingularity(std::string(what) + " vanishes (" + std::to_string(value) + ")");
  }
  return value;
}

}  // namespace curvedyn::detail
