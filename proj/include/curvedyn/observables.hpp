#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>

#include "curvedyn/geometry.hpp"
#include "curvedyn/jet.hpp"

namespace curvedyn {

/// Parameters shared by the observable families. Unused entries stay zero.
struct ObservableParams {
  double kappa = 0.0;
  double alpha = 0.0;  // oscillator frequency
  double k = 0.0;      // Kepler coupling (signed)
  double k1 = 0.0;     // nonlinear couplings k_i / x_i^2
  double k2 = 0.0;
  double k3 = 0.0;

  double coupling(int i) const;  // k1, k2, k3 for i = 1, 2, 3
};

/// Jets of the phase variables and of the building blocks shared by every
/// observable (Noether momenta, kappa-Cartesian coordinates, kinetic term).
/// Derived quantities are computed on first use and cached, so an evaluation
/// only pays for what it touches and only hits the guards it needs.
class PhaseFrame {
 public:
  PhaseFrame(double kappa, const PhaseState& s);

  double kappa() const noexcept { return kappa_; }
  const PhaseState& state() const noexcept { return state_; }

  const Jet& r() const { return vars_[0]; }
  const Jet& theta() const { return vars_[1]; }
  const Jet& phi() const { return vars_[2]; }
  const Jet& p_r() const { return vars_[3]; }
  const Jet& p_theta() const { return vars_[4]; }
  const Jet& p_phi() const { return vars_[5]; }

  const Jet& sin_r() const { return sin_r_; }      // Sin_k(r)
  const Jet& cos_r() const { return cos_r_; }      // Cos_k(r)
  const Jet& sin_theta() const { return sin_theta_; }
  const Jet& cos_theta() const { return cos_theta_; }
  const Jet& sin_phi() const { return sin_phi_; }
  const Jet& cos_phi() const { return cos_phi_; }

  const Jet& tan_r() const;        // Tan_k(r); guards Cos_k(r)
  const Jet& cot_r() const;        // Cos_k(r)/Sin_k(r); guards Sin_k(r)
  const Jet& cot_theta() const;    // guards sin(theta)

  /// Direction cosines (sin t cos p, sin t sin p, cos t), i = 1..3.
  const Jet& direction(int i) const;
  /// kappa-Cartesian coordinates x_k, y_k, z_k = Sin_k(r) * direction(i).
  const Jet& coord(int i) const;
  /// coord(i), throwing DomainSingularity if it is numerically zero.
  const Jet& coord_nonzero(int i) const;

  const Jet& P(int i) const;  // Noether momenta of the X_i fields
  const Jet& J(int i) const;  // angular momenta (Noether momenta of Y_i)
  const Jet& kinetic() const; // geodesic Hamiltonian

 private:
  double kappa_;
  PhaseState state_;
  std::array<Jet, kPhaseDim> vars_;
  Jet sin_r_, cos_r_, sin_theta_, cos_theta_, sin_phi_, cos_phi_;

  mutable std::optional<Jet> tan_r_, cot_r_, cot_theta_, kinetic_;
  mutable std::array<std::optional<Jet>, 3> direction_, coord_, P_, J_;
};

/// A named real phase-space function with an exact gradient. Immutable after
/// construction and safe to share between threads.
class Observable {
 public:
  using Fn = std::function<Jet(const PhaseFrame&)>;

  Observable(std::string name, double kappa, Fn fn);

  const std::string& name() const noexcept { return name_; }
  double kappa() const noexcept { return kappa_; }

  Jet jet(const PhaseState& s) const;
  Jet jet(const PhaseFrame& frame) const { return fn_(frame); }
  double operator()(const PhaseState& s) const { return jet(s).v; }
  Gradient gradient(const PhaseState& s) const { return jet(s).d; }

  Observable renamed(std::string name) const;

 private:
  std::string name_;
  double kappa_;
  Fn fn_;
};

Observable operator+(const Observable& a, const Observable& b);
Observable operator-(const Observable& a, const Observable& b);
Observable operator*(const Observable& a, const Observable& b);
Observable operator*(double c, const Observable& a);
Observable square(const Observable& a);
Observable constant(double value, double kappa);

/// Closed-form gradient (d/dr, d/dtheta, d/dphi, d/dp_r, d/dp_theta, d/dp_phi).
Gradient analytic_gradient(const Observable& obs, const PhaseState& s);

/// Complex observables are pairs of real observables.
struct ComplexObservable {
  Observable re;
  Observable im;

  std::complex<double> operator()(const PhaseState& s) const;
};

// --- free motion -----------------------------------------------------------

Observable noether_P(int i, double kappa);
Observable angular_J(int i, double kappa = 0.0);
Observable kappa_coordinate(int i, double kappa);
Observable kinetic_energy(double kappa);
Observable angular_momentum_squared(double kappa);  // J1^2 + J2^2 + J3^2
Observable noether_P_squared(double kappa);         // P1^2 + P2^2 + P3^2
Observable radial_momentum_sin(double kappa);       // p_r Sin_k(r)

// --- oscillator family -----------------------------------------------------

/// Fradkin entries K_ij. Diagonal entries include the 2 k_i / (Tan_k(r) n_i)^2
/// term of the Smorodinsky-Winternitz system; off-diagonal entries exist only
/// for the pure oscillator and throw UnsupportedEntry if any k_i != 0.
Observable fradkin_K(int i, int j, const ObservableParams& p);

/// M_j = P_j + i alpha Tan_k(r) n_j.
ComplexObservable complex_M(int j, double kappa, double alpha);

/// lambda_k = 1 / Cos_k^2(r).
Observable oscillator_lambda(double kappa);

/// K_J1 = J1^2 + 2 (k2 z^2/y^2 + k3 y^2/z^2) and cyclic.
Observable sw_KJ(int i, const ObservableParams& p);

struct Osc112Observables {
  Observable A_z;
  Observable V_112;
  Observable K_3;
  Observable K_J3;
  Observable K_12;
  Observable K_RL1;
  Observable K_RL2;
};

Osc112Observables osc112_observables(const ObservableParams& p);

// --- Kepler family ---------------------------------------------------------

/// K_RL1 = (P2 J3 - P3 J2) + k sin t cos p and cyclic.
Observable kepler_RL(int i, double kappa, double k);

/// R_i = K_RLi + 2 Cos_k Sin_k n_i (k1/x^2 + k2/y^2 + k3/z^2).
Observable k123_R(int i, const ObservableParams& p);
/// p_r Sin_k(r) / x_i.
Observable radial_ratio(int i, double kappa);
/// lambda_i = 1 / x_i^2.
Observable k123_lambda(int i, double kappa);
/// N_i = R_i + i sqrt(2 k_i) p_r Sin_k(r) / x_i; throws NegativeCoupling if k_i < 0.
ComplexObservable k123_N(int i, const ObservableParams& p);
/// K_Ri = |N_i|^2, quartic in the momenta; throws NegativeCoupling if k_i < 0.
Observable k123_KR(int i, const ObservableParams& p);

}  // namespace curvedyn
