#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "curvedyn/systems.hpp"

namespace curvedyn {

/// Name of the generator, recorded in every report that depends on it.
inline constexpr std::string_view kRngName = "mt19937_64, uniform = (x >> 11) * 2^-53";

/// Seeded generator with a fully specified uniform mapping, so sampled
/// states are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

struct SamplingOptions {
  double margin = 0.05;      // lower bound on sin(theta), Sin_k(r), |Cos_k(r)|, |x_i|, ...
  double momentum = 1.0;     // momenta uniform in [-momentum, momentum]
  double r_max_open = 2.0;   // radial range for kappa <= 0
  int max_attempts = 100000;
};

/// True if s keeps the margin from every chart and potential singularity of
/// the system and the Hamiltonian and all cataloged integrals evaluate.
bool acceptable_state(const SystemSpec& spec, const PhaseState& s,
                      const SamplingOptions& opts = {});

/// Rejection sampling: r uniform in (0, pi/sqrt(kappa)) or (0, r_max_open),
/// theta in (0, pi), phi in [0, 2 pi), momenta in the box.
PhaseState sample_state(const SystemSpec& spec, Rng& rng, const SamplingOptions& opts = {});

}  // namespace curvedyn
