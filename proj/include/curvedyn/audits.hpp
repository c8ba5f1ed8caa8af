#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curvedyn/sampling.hpp"
#include "curvedyn/systems.hpp"

namespace curvedyn {

/// One side-by-side evaluation of an identity. scale is the sum of the
/// magnitudes of the terms that cancel, the natural size of roundoff.
struct IdentityValue {
  double computed = 0.0;
  double expected = 0.0;
  double scale = 0.0;

  double residual() const;           // |computed - expected|
  double relative_residual() const;  // residual / scale (0 if both vanish)
};

/// {f, g} together with the magnitude sum of its six products.
IdentityValue bracket_value(const Observable& f, const Observable& g, const PhaseState& s,
                            double expected = 0.0);

// --- Fradkin matrix -----------------------------------------------------------

struct FradkinResidual {
  std::string property;  // "i", "ii", ..., "vi"
  std::string identity;
  IdentityValue value;
};

/// Every algebraic property of the oscillator's Fradkin matrix at s: the trace
/// relation, det = 0, [K] J = 0, the three Cos^2 J_i^2 quadratic relations,
/// the three alpha^2 J_i^2 minors and the three contractions.
std::vector<FradkinResidual> fradkin_audit(double kappa, double alpha, const PhaseState& s);

// --- bracket tables -------------------------------------------------------------

/// A displayed identity of one system. eval may draw fresh coefficients for
/// c-parametrized families from the generator.
struct BracketIdentity {
  std::string name;
  std::function<IdentityValue(const PhaseState&, Rng&)> eval;
};

std::vector<BracketIdentity> bracket_identities(const SystemSpec& spec);

struct BracketResidual {
  std::string identity;
  PhaseState state;       // where the largest residual occurred
  double expected = 0.0;
  double computed = 0.0;
  double residual = 0.0;  // |computed - expected|, maximum over the samples
  double scale = 0.0;
  int samples = 0;
};

/// Evaluates every identity of the system at n_states sampled states and
/// keeps the worst sample of each. States on which any identity hits a
/// domain guard are replaced by fresh samples.
std::vector<BracketResidual> bracket_table_audit(const SystemSpec& spec, int n_states, Rng& rng,
                                                 const SamplingOptions& opts = {});

// --- closed orbits ------------------------------------------------------------------

struct ClosedOrbitOptions {
  double tol = 1e-12;
  double delta = 1e-4;       // closure threshold on the normalized distance
  double r_bound = 50.0;     // Unbounded if r exceeds this (kappa <= 0)
  int min_radial_turns = 1;  // radial oscillations before a return counts
};

struct ClosedOrbitResult {
  bool is_closed = false;
  double return_distance = 0.0;  // normalized phase-space distance at the best return
  double period_estimate = 0.0;  // time of the best return
};

/// Integrates adaptively and looks for the first return to s0 after at least
/// one full radial oscillation. Coordinates are normalized by their range over
/// the orbit and phi is compared modulo 2 pi. Throws Unbounded if the orbit
/// escapes and NoReturn (carrying the best distance) if t_max passes first.
ClosedOrbitResult closed_orbit_check(const SystemSpec& spec, const PhaseState& s0, double t_max,
                                     const ClosedOrbitOptions& opts = {});

}  // namespace curvedyn
