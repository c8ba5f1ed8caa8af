#pragma once

#include <stdexcept>
#include <string>

namespace curvedyn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula was evaluated on (or too close to) one of its coordinate or
/// potential singularities: Sin_k(r) = 0, Cos_k(r) = 0, sin(theta) = 0, or a
/// vanishing kappa-Cartesian coordinate under a nonzero nonlinear coupling.
class DomainSingularity : public Error {
 public:
  using Error::Error;
};

/// Off-diagonal Fradkin entries requested for a system with nonzero k_i.
class UnsupportedEntry : public Error {
 public:
  using Error::Error;
};

/// sqrt(2 k_i) requested with k_i < 0.
class NegativeCoupling : public Error {
 public:
  using Error::Error;
};

/// Implicit-midpoint stage iteration failed to converge.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Closed-orbit search left the bounded region.
class Unbounded : public Error {
 public:
  using Error::Error;
};

/// Closed-orbit search reached t_max without a return.
class NoReturn : public Error {
 public:
  NoReturn(const std::string& what, double best_distance)
      : Error(what), best_distance_(best_distance) {}
  double best_distance() const noexcept { return best_distance_; }

 private:
  double best_distance_;
};

/// Invalid user-supplied configuration (parameters, CLI flags, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvedyn
