#pragma once

#include <array>
#include <string_view>

#include "curvedyn/jet.hpp"

namespace curvedyn {

/// Geodesic polar coordinates: r is the geodesic distance to the origin (the
/// north pole on the sphere), not a radius. phi is stored unwrapped.
struct ConfigPoint {
  double r = 1.0;
  double theta = 1.0;
  double phi = 0.0;
};

/// Point of the cotangent bundle; momenta are conjugate to (r, theta, phi).
struct PhaseState {
  ConfigPoint q;
  double p_r = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
};

/// Point of the tangent bundle (Lagrangian side).
struct VelocityState {
  ConfigPoint q;
  double v_r = 0.0;
  double v_theta = 0.0;
  double v_phi = 0.0;
};

/// Components of a tangent vector along (d/dr, d/dtheta, d/dphi).
struct TangentVector {
  double a_r = 0.0;
  double a_theta = 0.0;
  double a_phi = 0.0;
};

using PhaseVector = std::array<double, kPhaseDim>;

PhaseVector to_vector(const PhaseState& s);
PhaseState from_vector(const PhaseVector& v);

/// r > 0, r < pi/sqrt(kappa) on the sphere, theta in (0, pi), all finite.
bool is_valid(double kappa, const ConfigPoint& q);
bool is_valid(double kappa, const PhaseState& s);

struct MetricDiag {
  double g_rr;
  double g_thth;
  double g_phph;
};

/// Diagonal of ds^2 = dr^2 + Sin_k^2(r) dtheta^2 + Sin_k^2(r) sin^2(theta) dphi^2.
MetricDiag metric_coeffs(double kappa, const ConfigPoint& q);

/// sqrt|g| = Sin_k^2(r) sin(theta).
double volume_density(double kappa, const ConfigPoint& q);

enum class KillingField { X1, X2, X3, Y1, Y2, Y3 };

std::string_view to_string(KillingField f);

/// The six Killing fields of the constant-curvature metric. X_i depend on
/// kappa (translations on E^3, rotations through the origin's antipodal
/// circle on S^3); Y_i are the rotations about the origin.
/// Throws DomainSingularity where sin(theta) or Sin_k(r) vanish.
TangentVector killing_field(KillingField id, double kappa, const ConfigPoint& q);

/// [A, B]^i = A^j d_j B^i - B^j d_j A^i with central differences of step h.
TangentVector lie_bracket_numeric(KillingField a, KillingField b, double kappa,
                                  const ConfigPoint& q, double h = 1e-5);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// (L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k, derivatives by
/// central differences of step h. Vanishes for Killing fields.
Matrix3 lie_derivative_metric(KillingField id, double kappa, const ConfigPoint& q,
                              double h = 1e-5);

/// (1/sqrt|g|) d_i (sqrt|g| X^i) by central differences. Zero iff the flow of
/// X preserves the Riemannian volume form.
double volume_divergence(KillingField id, double kappa, const ConfigPoint& q, double h = 1e-5);

/// Geodesic Lagrangian T_g = 1/2 (v_r^2 + Sin^2 v_theta^2 + Sin^2 sin^2(theta) v_phi^2).
double geodesic_lagrangian(double kappa, const VelocityState& s);

/// Accelerations of the geodesic flow (the Lagrangian forces f_r, f_theta, f_phi).
std::array<double, 3> geodesic_forces(double kappa, const VelocityState& s);

/// Noether momenta i(X) theta_L evaluated on velocities: {P1, P2, P3, J1, J2, J3}.
std::array<double, 6> noether_momenta_velocity(double kappa, const VelocityState& s);

PhaseState legendre(double kappa, const VelocityState& s);
VelocityState legendre_inv(double kappa, const PhaseState& s);

// ---------------------------------------------------------------------------
// Alternative radial charts. Angular coordinates and momenta are untouched;
// the radial pair is carried by the point transformations
//   rho = Sin_k(r),  p_rho = p_r / Cos_k(r)
//   R   = Tan_k(r),  p_R   = p_r Cos_k^2(r)
// Inverse maps use the branch Cos_k(r) > 0.

enum class RadialChart { geodesic, rho, tangent };

struct ChartState {
  RadialChart chart = RadialChart::geodesic;
  double radial = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double p_radial = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;
};

ChartState to_rho_chart(double kappa, const PhaseState& s);
ChartState to_R_chart(double kappa, const PhaseState& s);
PhaseState from_chart(double kappa, const ChartState& s);

/// Kinetic energy read off the chart's own Lagrangian (metric coefficients in
/// rho or R) after its Legendre transform.
double chart_kinetic(double kappa, const ChartState& s);

/// Same, as a Jet in the chart's own canonical variables
/// (radial, theta, phi, p_radial, p_theta, p_phi).
Jet chart_kinetic_jet(double kappa, const std::array<Jet, kPhaseDim>& z, RadialChart chart);

}  // namespace curvedyn
