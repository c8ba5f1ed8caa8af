#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curvedyn/observables.hpp"
#include "curvedyn/systems.hpp"

namespace curvedyn {

// --- Poisson brackets -------------------------------------------------------

/// {f, g} = sum_a (df/dq_a dg/dp_a - df/dp_a dg/dq_a) from analytic gradients.
double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& s);

/// Central-difference gradient with step h in every phase coordinate.
Gradient fd_gradient(const Observable& f, const PhaseState& s, double h = 1e-6);

/// The same bracket built from fd_gradient.
double poisson_bracket_fd(const Observable& f, const Observable& g, const PhaseState& s,
                          double h = 1e-6);

// --- integration ------------------------------------------------------------

enum class Method { rk4_fixed, rk45_adaptive, implicit_midpoint };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct IntegratorOptions {
  Method method = Method::rk45_adaptive;
  double tol = 1e-12;    // rk45: atol = rtol = tol
  double dt = 1e-3;      // fixed-step methods
  double dt_min = 1e-12; // rejected steps shrink down to this, then the run is truncated
  double dt_max = std::numeric_limits<double>::infinity();
  double implicit_tol = 1e-13;
  int implicit_max_iter = 100;
  long max_steps = 50'000'000;
};

struct StepDiagnostics {
  double dt = 0.0;
  double error_estimate = 0.0;  // rk45: max |err_i| / (1 + max(|y_i|, |y_new_i|))
  int iterations = 0;           // implicit midpoint fixed-point iterations
  int rejections = 0;
};

struct OdeSolution {
  std::vector<double> times;
  std::vector<PhaseVector> states;
  std::vector<StepDiagnostics> diagnostics;  // one per accepted step
  bool truncated = false;
  std::string truncation_reason;
};

using OdeRhs = std::function<PhaseVector(const PhaseVector&)>;
/// Returns a reason if the step from -> to must be rejected.
using StepCheck =
    std::function<std::optional<std::string>(const PhaseVector& from, const PhaseVector& to)>;
/// Called after every accepted step; returning false stops the run.
using StepObserver = std::function<bool(double t, const PhaseVector& y)>;

/// Integrates y' = f(y) from t = 0 to t_end. A DomainSingularity raised by f,
/// or a reason returned by check, rejects the step and halves it; below dt_min
/// the run stops with truncated = true. Throws NonConvergence if an implicit
/// midpoint stage does not converge.
OdeSolution integrate_ode(const OdeRhs& f, const PhaseVector& y0, double t_end,
                          const IntegratorOptions& opts, const StepCheck& check = {},
                          const StepObserver& observer = {});

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseState> states;
  std::vector<StepDiagnostics> diagnostics;
  bool truncated = false;
  std::string truncation_reason;
};

/// Reason a step of the system's flow is not acceptable: invalid end point, a
/// sign change of x_i with k_i != 0, or of an osc112 denominator.
std::optional<std::string> step_violation(const SystemSpec& spec, const PhaseVector& from,
                                          const PhaseVector& to);

Trajectory integrate(const SystemSpec& spec, const PhaseState& s0, double t_end,
                     const IntegratorOptions& opts = {}, const StepObserver& observer = {});

// --- conservation -----------------------------------------------------------

struct ConservationRow {
  std::string name;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;  // max_abs_drift / max(|initial|, 1)
};

struct ConservationReport {
  std::vector<ConservationRow> rows;
};

ConservationReport conservation_report(const Trajectory& traj,
                                       const std::vector<Observable>& observables);

// --- functional independence -----------------------------------------------

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
};

/// Numerical rank of the matrix whose rows are the observables' gradients,
/// each scaled to unit length (rescaling an integral does not change
/// independence, and quartic rows would otherwise swamp the threshold): the
/// number of singular values above threshold * largest.
RankResult independence_rank(const std::vector<Observable>& observables, const PhaseState& s,
                             double threshold = 1e-6);

}  // namespace curvedyn
