#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "curvedyn/geometry.hpp"
#include "curvedyn/observables.hpp"

namespace curvedyn {

enum class SystemId { free, oscillator, sw, osc112, kepler, kepler123 };

/// Stable identifiers: free, oscillator, sw, osc112, kepler, kepler123.
std::string_view to_string(SystemId id);
/// Throws ConfigError for unknown names.
SystemId system_from_string(std::string_view name);
const std::vector<SystemId>& all_systems();

struct SystemParams {
  double kappa = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// Names of the parameters a system reads; all others must be zero.
std::vector<std::string> parameter_names(SystemId id);

struct NamedSet {
  std::string name;
  std::vector<Observable> members;
};

/// One of the six Hamiltonian systems with validated parameters and its
/// catalog of first integrals. Immutable after construction.
class SystemSpec {
 public:
  /// Throws ConfigError if a parameter the system does not use is nonzero,
  /// alpha < 0, or k_i < 0 (kepler123 accepts negative k_i; its K_Ri are then
  /// left out of the catalog).
  SystemSpec(SystemId id, SystemParams params);

  SystemId id() const noexcept { return id_; }
  const SystemParams& params() const noexcept { return params_; }
  double kappa() const noexcept { return params_.kappa; }
  ObservableParams observable_params() const;

  const Observable& hamiltonian() const { return hamiltonian_; }
  /// Configuration-space part of the Hamiltonian.
  const Observable& potential() const { return potential_; }

  const std::vector<Observable>& integrals() const { return integrals_; }
  const std::vector<NamedSet>& involution_sets() const { return involution_; }
  const std::vector<NamedSet>& independence_sets() const { return independence_; }

  /// Resolves a catalog name ("H", "P1", "K12", "KRL2", "KR1", ...) against
  /// this system. "K12" and "KRL1" mean the system's own integral of that
  /// name. Throws ConfigError for unknown names.
  Observable observable(std::string_view name) const;
  std::vector<std::string> observable_names() const;

 private:
  SystemId id_;
  SystemParams params_;
  Observable hamiltonian_;
  Observable potential_;
  std::vector<Observable> integrals_;
  std::vector<NamedSet> involution_;
  std::vector<NamedSet> independence_;
};

/// True for the quartic integrals K_R1..K_R3.
bool is_quartic(std::string_view observable_name);

double hamiltonian(const SystemSpec& spec, const PhaseState& s);

/// (dH/dp_r, dH/dp_theta, dH/dp_phi, -dH/dr, -dH/dtheta, -dH/dphi), laid out
/// in the PhaseVector order (r, theta, phi, p_r, p_theta, p_phi).
PhaseVector hamilton_rhs(const SystemSpec& spec, const PhaseState& s);

double potential(const SystemSpec& spec, const ConfigPoint& q);

struct ProfileRow {
  double r = 0.0;
  double V = 0.0;
  bool valid = true;
  std::string note;  // reason for an invalid row
};

/// V(r) on the ray theta = pi/2, phi = pi/4, n points evenly spaced in
/// [r_min, r_max]. z vanishes on this ray, so a k3/z^2 term is left out of the
/// profile. Points where V is undefined become rows with valid = false.
std::vector<ProfileRow> potential_profile(const SystemSpec& spec, double r_min, double r_max,
                                          int n);

// Hamiltonians written in the alternative radial charts, available for the
// free, oscillator and Kepler systems:
//   rho chart: V = alpha^2/2 rho^2/(1 - kappa rho^2)  or  k sqrt(1 - kappa rho^2)/rho
//   R chart:   V = alpha^2/2 R^2                      or  k / R
// Arguments are in the chart's own canonical variables.

/// Throws ConfigError for systems without a chart form.
double chart_hamiltonian(const SystemSpec& spec, const ChartState& s);
PhaseVector chart_hamilton_rhs(const SystemSpec& spec, const ChartState& s);

}  // namespace curvedyn
