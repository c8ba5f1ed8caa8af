#include "curvedyn/sampling.hpp"

#include <cmath>
#include <numbers>

#include "curvedyn/errors.hpp"

namespace curvedyn {

bool acceptable_state(const SystemSpec& spec, const PhaseState& s, const SamplingOptions& opts) {
  const double kappa = spec.kappa();
  const double m = opts.margin;
  if (!is_valid(kappa, s)) return false;
  const double S = sin_k(kappa, s.q.r);
  const double C = cos_k(kappa, s.q.r);
  const double st = std::sin(s.q.theta);
  const double ct = std::cos(s.q.theta);
  if (st <= m || S <= m || std::abs(C) <= m) return false;
  const double x = S * st * std::cos(s.q.phi);
  const double y = S * st * std::sin(s.q.phi);
  const double z = S * ct;
  if (std::abs(x) <= m || std::abs(y) <= m || std::abs(z) <= m) return false;
  if (spec.id() == SystemId::osc112) {
    const double tc = S / C * ct;
    if (std::abs(1.0 - kappa * (x * x + y * y)) <= m) return false;
    if (std::abs(1.0 - kappa * tc * tc) <= m) return false;
  }
  try {
    if (!std::isfinite(spec.hamiltonian()(s))) return false;
    for (const auto& f : spec.integrals()) {
      if (!std::isfinite(f(s))) return false;
    }
  } catch (const DomainSingularity&) {
    return false;
  }
  return true;
}

PhaseState sample_state(const SystemSpec& spec, Rng& rng, const SamplingOptions& opts) {
  const double kappa = spec.kappa();
  const double r_max = kappa > 0.0 ? std::numbers::pi / std::sqrt(kappa) : opts.r_max_open;
  const double p = opts.momentum;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    PhaseState s;
    s.q.r = rng.uniform(0.0, r_max);
    s.q.theta = rng.uniform(0.0, std::numbers::pi);
    s.q.phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    s.p_r = rng.uniform(-p, p);
    s.p_theta = rng.uniform(-p, p);
    s.p_phi = rng.uniform(-p, p);
    if (acceptable_state(spec, s, opts)) return s;
  }
  throw DomainSingularity("no acceptable state found for system " +
                          std::string(to_string(spec.id())));
}

}  // namespace curvedyn
