#pragma once

// Straight-line transcription of every observable, written directly from the
// formulas with its own trigonometric kernels. Shares nothing with the library
// except the plain parameter struct, so a transcription slip on either side
// shows up as a mismatch.

#include <cmath>
#include <stdexcept>
#include <string>

namespace oracle {

struct Params {
  double kappa = 0, alpha = 0, k = 0, k1 = 0, k2 = 0, k3 = 0;
};

struct State {
  double r, th, ph, pr, pt, pp;
};

inline double Sin(double kappa, double x) {
  if (kappa > 0) return std::sin(std::sqrt(kappa) * x) / std::sqrt(kappa);
  if (kappa < 0) return std::sinh(std::sqrt(-kappa) * x) / std::sqrt(-kappa);
  return x;
}

inline double Cos(double kappa, double x) {
  if (kappa > 0) return std::cos(std::sqrt(kappa) * x);
  if (kappa < 0) return std::cosh(std::sqrt(-kappa) * x);
  return 1.0;
}

inline double Tan(double kappa, double x) { return Sin(kappa, x) / Cos(kappa, x); }

// system: free, oscillator, sw, osc112, kepler, kepler123.
inline double eval(const std::string& system, const Params& p, const std::string& name, const State& s) {
  const double kap = p.kappa, a2 = p.alpha * p.alpha;
  const double S = Sin(kap, s.r), C = Cos(kap, s.r), T = Tan(kap, s.r);
  const double st = std::sin(s.th), ct = std::cos(s.th), sp = std::sin(s.ph), cp = std::cos(s.ph);
  const double pr = s.pr, pt = s.pt, pp = s.pp;

  const double x = S * st * cp, y = S * st * sp, z = S * ct;
  const double P1 = st * cp * pr + (C / S) * (ct * cp * pt - sp / st * pp);
  const double P2 = st * sp * pr + (C / S) * (ct * sp * pt + cp / st * pp);
  const double P3 = ct * pr - (C / S) * st * pt;
  const double J1 = -(sp * pt + ct / st * cp * pp);
  const double J2 = cp * pt - ct / st * sp * pp;
  const double J3 = pp;
  const double kinetic = 0.5 * (pr * pr + (pt * pt + pp * pp / (st * st)) / (S * S));

  if (name == "T") return kinetic;
  if (name == "P1") return P1;
  if (name == "P2") return P2;
  if (name == "P3") return P3;
  if (name == "J1") return J1;
  if (name == "J2") return J2;
  if (name == "J3") return J3;
  if (name == "Jsq") return pt * pt + pp * pp / (st * st);
  if (name == "Psq") return P1 * P1 + P2 * P2 + P3 * P3;
  if (name == "x") return x;
  if (name == "y") return y;
  if (name == "z") return z;
  if (name == "prS") return pr * S;

  const double u1 = st * cp, u2 = st * sp, u3 = ct;
  const double nl = p.k1 / (x * x) + p.k2 / (y * y) + p.k3 / (z * z);
  const double KJ1 = J1 * J1 + 2 * (p.k2 * z * z / (y * y) + p.k3 * y * y / (z * z));
  const double KJ2 = J2 * J2 + 2 * (p.k1 * z * z / (x * x) + p.k3 * x * x / (z * z));
  const double KJ3 = J3 * J3 + 2 * (p.k1 * y * y / (x * x) + p.k2 * x * x / (y * y));

  if (system == "free") {
    if (name == "V") return 0.0;
    if (name == "H") return kinetic;
  } else if (system == "oscillator") {
    const double V = 0.5 * a2 * T * T;
    if (name == "V") return V;
    if (name == "H") return kinetic + V;
    if (name == "K11") return P1 * P1 + a2 * T * T * u1 * u1;
    if (name == "K22") return P2 * P2 + a2 * T * T * u2 * u2;
    if (name == "K33") return P3 * P3 + a2 * T * T * u3 * u3;
    if (name == "K12") return P1 * P2 + a2 * T * T * st * st * cp * sp;
    if (name == "K23") return P2 * P3 + a2 * T * T * st * ct * sp;
    if (name == "K31") return P3 * P1 + a2 * T * T * st * ct * cp;
    if (name == "lambda") return 1.0 / (C * C);
    if (name == "ReM1") return P1;
    if (name == "ReM2") return P2;
    if (name == "ReM3") return P3;
    if (name == "ImM1") return p.alpha * T * u1;
    if (name == "ImM2") return p.alpha * T * u2;
    if (name == "ImM3") return p.alpha * T * u3;
  } else if (system == "sw") {
    const double V = 0.5 * a2 * T * T + nl;
    if (name == "V") return V;
    if (name == "H") return kinetic + V;
    if (name == "K11") return P1 * P1 + a2 * T * T * u1 * u1 + 2 * p.k1 / ((T * u1) * (T * u1));
    if (name == "K22") return P2 * P2 + a2 * T * T * u2 * u2 + 2 * p.k2 / ((T * u2) * (T * u2));
    if (name == "K33") return P3 * P3 + a2 * T * T * u3 * u3 + 2 * p.k3 / ((T * u3) * (T * u3));
    if (name == "KJ1") return KJ1;
    if (name == "KJ2") return KJ2;
    if (name == "KJ3") return KJ3;
  } else if (system == "osc112") {
    const double tc = T * ct;
    const double Az = tc / (1 - kap * tc * tc);
    const double rho2 = x * x + y * y;
    const double V112 = 0.5 * a2 / (1 - kap * rho2) * (rho2 + 4 * Az * Az);
    const double V = V112 + p.k1 / (x * x) + p.k2 / (y * y);
    if (name == "Az") return Az;
    if (name == "V112") return V112;
    if (name == "V") return V;
    if (name == "H") return kinetic + V;
    if (name == "K3") return P3 * P3 + 4 * a2 * Az * Az;
    if (name == "KJ3") return J3 * J3 + 2 * p.k2 * (x / y) * (x / y) + 2 * p.k1 * (y / x) * (y / x);
    if (name == "K12") {
      return (P1 * P1 + kap * J1 * J1) + (P2 * P2 + kap * J2 * J2) +
             a2 * (1 + 4 * kap * Az * Az) * (rho2 / (1 - kap * rho2)) +
             2 * p.k2 * ((1 - kap * x * x) / (y * y)) + 2 * p.k1 * ((1 - kap * y * y) / (x * x));
    }
    const double tth = std::tan(s.th);
    if (name == "KRL1") return -P1 * J2 + a2 * (tth * cp / C) * Az * Az * x - 2 * p.k1 * C * (z / (x * x));
    if (name == "KRL2") return P2 * J1 + a2 * (tth * sp / C) * Az * Az * y - 2 * p.k2 * C * (z / (y * y));
  } else if (system == "kepler" || system == "kepler123") {
    const double V = p.k / T + (system == "kepler123" ? nl : 0.0);
    const double KRL1 = (P2 * J3 - P3 * J2) + p.k * u1;
    const double KRL2 = (P3 * J1 - P1 * J3) + p.k * u2;
    const double KRL3 = (P1 * J2 - P2 * J1) + p.k * u3;
    if (name == "V") return V;
    if (name == "H") return kinetic + V;
    if (name == "KRL1") return KRL1;
    if (name == "KRL2") return KRL2;
    if (name == "KRL3") return KRL3;
    if (system == "kepler123") {
      const double R1 = KRL1 + 2 * (C * S) * u1 * nl;
      const double R2 = KRL2 + 2 * (C * S) * u2 * nl;
      const double R3 = KRL3 + 2 * (C * S) * u3 * nl;
      const double Q1 = pr * S / x, Q2 = pr * S / y, Q3 = pr * S / z;
      if (name == "KJ1") return KJ1;
      if (name == "KJ2") return KJ2;
      if (name == "KJ3") return KJ3;
      if (name == "R1") return R1;
      if (name == "R2") return R2;
      if (name == "R3") return R3;
      if (name == "Q1") return Q1;
      if (name == "Q2") return Q2;
      if (name == "Q3") return Q3;
      if (name == "lambda1") return 1 / (x * x);
      if (name == "lambda2") return 1 / (y * y);
      if (name == "lambda3") return 1 / (z * z);
      if (name == "KR1") return R1 * R1 + 2 * p.k1 * Q1 * Q1;
      if (name == "KR2") return R2 * R2 + 2 * p.k2 * Q2 * Q2;
      if (name == "KR3") return R3 * R3 + 2 * p.k3 * Q3 * Q3;
    }
  }
  throw std::invalid_argument("oracle has no transcription of " + name + " for " + system);
}

}  // namespace oracle
