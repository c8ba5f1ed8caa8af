#include "curvedyn/audits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvedyn/dynamics.hpp"
#include "curvedyn/errors.hpp"

namespace curvedyn {

double IdentityValue::residual() const { return std::abs(computed - expected); }

double IdentityValue::relative_residual() const {
  const double r = residual();
  if (r == 0.0) return 0.0;
  return r / scale;
}

IdentityValue bracket_value(const Observable& f, const Observable& g, const PhaseState& s,
                            double expected) {
  const Gradient a = f.gradient(s);
  const Gradient b = g.gradient(s);
  IdentityValue v;
  v.expected = expected;
  for (int i = 0; i < 3; ++i) {
    v.computed += a[i] * b[i + 3] - a[i + 3] * b[i];
    v.scale += std::abs(a[i] * b[i + 3]) + std::abs(a[i + 3] * b[i]);
  }
  v.scale += std::abs(expected);
  return v;
}

namespace {

// lhs = sum(terms), rhs given; scale = sum |terms| + |rhs|.
IdentityValue sum_identity(std::initializer_list<double> terms, double rhs) {
  IdentityValue v;
  v.expected = rhs;
  for (double t : terms) {
    v.computed += t;
    v.scale += std::abs(t);
  }
  v.scale += std::abs(rhs);
  return v;
}

std::string idx(int i) { return std::to_string(i); }

// Cyclic successor: 1 -> 2 -> 3 -> 1.
int next(int i) { return i % 3 + 1; }

}  // namespace

// --- Fradkin matrix ---------------------------------------------------------------

std::vector<FradkinResidual> fradkin_audit(double kappa, double alpha, const PhaseState& s) {
  const ObservableParams p{kappa, alpha, 0.0, 0.0, 0.0, 0.0};
  double K[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) K[i][j] = K[j][i] = fradkin_K(i + 1, j + 1, p)(s);
  }
  double J[3], P[3], x[3];
  for (int i = 0; i < 3; ++i) {
    J[i] = angular_J(i + 1, kappa)(s);
    P[i] = noether_P(i + 1, kappa)(s);
    x[i] = kappa_coordinate(i + 1, kappa)(s);
  }
  const double C = cos_k(kappa, s.q.r);
  const double S = sin_k(kappa, s.q.r);
  const double T = tan_k(kappa, s.q.r);
  const double Jsq = J[0] * J[0] + J[1] * J[1] + J[2] * J[2];
  const double Psq = P[0] * P[0] + P[1] * P[1] + P[2] * P[2];
  const double a2 = alpha * alpha;
  const double H = SystemSpec(SystemId::oscillator, {kappa, alpha, 0, 0, 0, 0}).hamiltonian()(s);

  std::vector<FradkinResidual> out;
  out.push_back({"i", "tr[K] + kappa J^2 = 2H",
                 sum_identity({K[0][0], K[1][1], K[2][2], kappa * Jsq}, 2.0 * H)});

  {
    const double t[6] = {K[0][0] * K[1][1] * K[2][2],  K[0][1] * K[1][2] * K[2][0],
                         K[0][2] * K[1][0] * K[2][1],  -K[0][2] * K[1][1] * K[2][0],
                         -K[0][1] * K[1][0] * K[2][2], -K[0][0] * K[1][2] * K[2][1]};
    out.push_back({"ii", "det[K] = 0", sum_identity({t[0], t[1], t[2], t[3], t[4], t[5]}, 0.0)});
  }

  for (int i = 0; i < 3; ++i) {
    out.push_back({"iii", "sum_j K" + idx(i + 1) + "j J_j = 0",
                   sum_identity({K[i][0] * J[0], K[i][1] * J[1], K[i][2] * J[2]}, 0.0)});
  }

  // x_a^2 K_bb - 2 x_a x_b K_ab + x_b^2 K_aa = Cos^2 J_c^2 for (a, b, c) cyclic.
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    out.push_back({"iv",
                   "x" + idx(a + 1) + "^2 K" + idx(b + 1) + idx(b + 1) + " - 2 x" + idx(a + 1) +
                       " x" + idx(b + 1) + " K" + idx(a + 1) + idx(b + 1) + " + x" + idx(b + 1) +
                       "^2 K" + idx(a + 1) + idx(a + 1) + " = Cos^2 J" + idx(c + 1) + "^2",
                   sum_identity({x[a] * x[a] * K[b][b], -2.0 * x[a] * x[b] * K[a][b],
                                 x[b] * x[b] * K[a][a]},
                                C * C * J[c] * J[c])});
  }

  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    out.push_back({"v",
                   "K" + idx(a + 1) + idx(a + 1) + " K" + idx(b + 1) + idx(b + 1) + " - K" +
                       idx(a + 1) + idx(b + 1) + "^2 = alpha^2 J" + idx(c + 1) + "^2",
                   sum_identity({K[a][a] * K[b][b], -K[a][b] * K[a][b]}, a2 * J[c] * J[c])});
  }

  {
    IdentityValue xx, xp, pp;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double t1 = K[i][j] * x[i] * x[j];
        const double t2 = K[i][j] * x[i] * P[j];
        const double t3 = K[i][j] * P[i] * P[j];
        xx.computed += t1;
        xx.scale += std::abs(t1);
        xp.computed += t2;
        xp.scale += std::abs(t2);
        pp.computed += t3;
        pp.scale += std::abs(t3);
      }
    }
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    xx.expected = 2.0 * r2 * H - Jsq;
    xx.scale += std::abs(2.0 * r2 * H) + Jsq;
    xp.expected = s.p_r * S * (2.0 * H - kappa * Jsq);
    xp.scale += std::abs(s.p_r * S) * (std::abs(2.0 * H) + std::abs(kappa * Jsq));
    pp.expected = Psq * Psq + a2 * T * T * s.p_r * s.p_r;
    pp.scale += std::abs(pp.expected);
    out.push_back({"vi", "K_ij x_i x_j = 2 (x^2 + y^2 + z^2) H - J^2", xx});
    out.push_back({"vi", "K_ij x_i P_j = p_r Sin (2H - kappa J^2)", xp});
    out.push_back({"vi", "K_ij P_i P_j = (P^2)^2 + alpha^2 Tan^2 p_r^2", pp});
  }
  return out;
}

// --- bracket tables -----------------------------------------------------------------

namespace {

using Table = std::vector<BracketIdentity>;

void add_commutes(Table& t, const Observable& f, const Observable& g) {
  t.push_back({"{" + f.name() + ", " + g.name() + "} = 0",
               [f, g](const PhaseState& s, Rng&) { return bracket_value(f, g, s); }});
}

// {f, g} = rhs(s).
void add_bracket(Table& t, std::string name, const Observable& f, const Observable& g,
                 std::function<double(const PhaseState&)> rhs) {
  t.push_back({std::move(name), [f, g, rhs](const PhaseState& s, Rng&) {
                 return bracket_value(f, g, s, rhs(s));
               }});
}

double coeff(Rng& rng) { return rng.uniform(-1.0, 1.0); }

Observable combo(double c1, const Observable& a, double c2, const Observable& b) {
  return c1 * a + c2 * b;
}

Observable combo(double c1, const Observable& a, double c2, const Observable& b, double c3,
                 const Observable& c) {
  return c1 * a + c2 * b + c3 * c;
}

// {J_i, c1 F1 + c2 F2 + c3 F3} = c_j F_k - c_k F_j, (i, j, k) cyclic.
void add_vector_family(Table& t, double kappa, const std::vector<Observable>& F,
                       const std::string& label) {
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    const Observable Ji = angular_J(i, kappa);
    t.push_back({"{J" + idx(i) + ", c1 " + label + "1 + c2 " + label + "2 + c3 " + label +
                     "3} = c" + idx(j) + " " + label + idx(k) + " - c" + idx(k) + " " + label +
                     idx(j),
                 [Ji, F, j, k](const PhaseState& s, Rng& rng) {
                   const double c[3] = {coeff(rng), coeff(rng), coeff(rng)};
                   const Observable sum = combo(c[0], F[0], c[1], F[1], c[2], F[2]);
                   const double rhs = c[j - 1] * F[k - 1](s) - c[k - 1] * F[j - 1](s);
                   return bracket_value(Ji, sum, s, rhs);
                 }});
  }
}

// {c1 A_i + c2 B_i, A_j + A_k + kappa (B'_j + B'_k)} = 0, (A = K_ii, B = J_i or K_Ji).
void add_triplet_family(Table& t, double kappa, const std::vector<Observable>& A,
                        const std::vector<Observable>& B, const std::vector<Observable>& Bq,
                        const std::string& bname) {
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    const int lo = std::min(j, k);
    const int hi = std::max(j, k);
    const Observable rest = A[lo - 1] + A[hi - 1] + kappa * (Bq[lo - 1] + Bq[hi - 1]);
    const Observable a = A[i - 1];
    const Observable b = B[i - 1];
    t.push_back({"{c1 " + a.name() + " + c2 " + b.name() + ", " + A[lo - 1].name() + " + " +
                     A[hi - 1].name() + " + kappa (" + bname + idx(lo) + " + " + bname + idx(hi) +
                     ")} = 0",
                 [a, b, rest](const PhaseState& s, Rng& rng) {
                   const double c1 = coeff(rng);
                   const double c2 = coeff(rng);
                   return bracket_value(combo(c1, a, c2, b), rest, s);
                 }});
  }
}

void add_coordinate_pairing(Table& t, double kappa) {
  for (int i = 1; i <= 3; ++i) {
    add_bracket(t, "{" + std::string(1, "xyz"[i - 1]) + "_k, P" + idx(i) + "} = Cos_k(r)",
                kappa_coordinate(i, kappa), noether_P(i, kappa),
                [kappa](const PhaseState& s) { return cos_k(kappa, s.q.r); });
  }
}

void add_radial_identity(Table& t, double kappa) {
  std::vector<Observable> x, P;
  for (int i = 1; i <= 3; ++i) {
    x.push_back(kappa_coordinate(i, kappa));
    P.push_back(noether_P(i, kappa));
  }
  t.push_back({"x P1 + y P2 + z P3 = p_r Sin_k(r)", [x, P, kappa](const PhaseState& s, Rng&) {
                 return sum_identity({x[0](s) * P[0](s), x[1](s) * P[1](s), x[2](s) * P[2](s)},
                                     s.p_r * sin_k(kappa, s.q.r));
               }});
}

Table free_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const Observable& H = spec.hamiltonian();
  std::vector<Observable> P, J;
  for (int i = 1; i <= 3; ++i) {
    P.push_back(noether_P(i, kappa));
    J.push_back(angular_J(i, kappa));
  }
  Table t;
  for (const auto& f : P) add_commutes(t, f, H);
  for (const auto& f : J) add_commutes(t, f, H);
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    const Observable Jk = J[k - 1];
    add_bracket(t, "{P" + idx(i) + ", P" + idx(j) + "} = kappa J" + idx(k), P[i - 1], P[j - 1],
                [Jk, kappa](const PhaseState& s) { return kappa * Jk(s); });
  }
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    const Observable Jk = J[k - 1];
    add_bracket(t, "{J" + idx(i) + ", J" + idx(j) + "} = J" + idx(k), J[i - 1], J[j - 1],
                [Jk](const PhaseState& s) { return Jk(s); });
  }
  add_vector_family(t, kappa, P, "P");

  const Observable Psq = noether_P_squared(kappa);
  const Observable Jsq = angular_momentum_squared(kappa);
  t.push_back({"P1^2 + P2^2 + P3^2 closed form", [Psq, kappa](const PhaseState& s, Rng&) {
                 const double C = cos_k(kappa, s.q.r);
                 const double S = sin_k(kappa, s.q.r);
                 const double st = std::sin(s.q.theta);
                 return sum_identity({Psq(s)}, s.p_r * s.p_r + C * C / (S * S) * s.p_theta * s.p_theta +
                                                   C * C / (S * S * st * st) * s.p_phi * s.p_phi);
               }});
  t.push_back({"J1^2 + J2^2 + J3^2 closed form", [Jsq](const PhaseState& s, Rng&) {
                 const double st = std::sin(s.q.theta);
                 return sum_identity({Jsq(s)},
                                     s.p_theta * s.p_theta + s.p_phi * s.p_phi / (st * st));
               }});
  t.push_back({"H = (P^2 + kappa J^2)/2", [Psq, Jsq, H, kappa](const PhaseState& s, Rng&) {
                 return sum_identity({0.5 * Psq(s), 0.5 * kappa * Jsq(s)}, H(s));
               }});
  add_commutes(t, H, Jsq);
  add_commutes(t, Jsq, J[2]);
  add_coordinate_pairing(t, kappa);
  add_radial_identity(t, kappa);
  return t;
}

Table oscillator_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const double alpha = spec.params().alpha;
  const ObservableParams op = spec.observable_params();
  const Observable& H = spec.hamiltonian();
  std::vector<Observable> J, Kd, Jq;
  for (int i = 1; i <= 3; ++i) {
    J.push_back(angular_J(i, kappa));
    Kd.push_back(fradkin_K(i, i, op));
    Jq.push_back(square(J.back()));
  }
  Table t;
  for (const auto& f : J) add_commutes(t, f, H);
  for (const auto& f : Kd) add_commutes(t, f, H);
  for (int i = 1; i <= 3; ++i) add_commutes(t, fradkin_K(i, next(i), op), H);

  const Observable lambda = oscillator_lambda(kappa);
  for (int j = 1; j <= 3; ++j) {
    const ComplexObservable M = complex_M(j, kappa, alpha);
    const Observable re = M.re;
    const Observable im = M.im;
    add_bracket(t, "Re {M" + idx(j) + ", H} = -lambda alpha Im M" + idx(j), re, H,
                [lambda, alpha, im](const PhaseState& s) { return -lambda(s) * alpha * im(s); });
    add_bracket(t, "Im {M" + idx(j) + ", H} = lambda alpha Re M" + idx(j), im, H,
                [lambda, alpha, re](const PhaseState& s) { return lambda(s) * alpha * re(s); });
  }
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    const ComplexObservable Mi = complex_M(i, kappa, alpha);
    const ComplexObservable Mj = complex_M(j, kappa, alpha);
    const Observable Kij = fradkin_K(i, j, op);
    const Observable Jk = J[k - 1];
    t.push_back({"Re(M" + idx(i) + " M" + idx(j) + "*) = " + Kij.name(),
                 [Mi, Mj, Kij](const PhaseState& s, Rng&) {
                   return sum_identity({Mi.re(s) * Mj.re(s), Mi.im(s) * Mj.im(s)}, Kij(s));
                 }});
    t.push_back({"Im(M" + idx(i) + " M" + idx(j) + "*) = alpha J" + idx(k),
                 [Mi, Mj, Jk, alpha](const PhaseState& s, Rng&) {
                   return sum_identity({Mi.im(s) * Mj.re(s), -Mi.re(s) * Mj.im(s)}, alpha * Jk(s));
                 }});
  }
  t.push_back({"H = (K11 + K22 + K33 + kappa J^2)/2", [Kd, Jq, H, kappa](const PhaseState& s, Rng&) {
                 return sum_identity({0.5 * Kd[0](s), 0.5 * Kd[1](s), 0.5 * Kd[2](s),
                                      0.5 * kappa * (Jq[0](s) + Jq[1](s) + Jq[2](s))},
                                     H(s));
               }});
  for (int i = 0; i < 3; ++i) add_commutes(t, Kd[i], J[i]);
  add_triplet_family(t, kappa, Kd, J, Jq, "J^2_");
  add_commutes(t, H, angular_momentum_squared(kappa));
  add_commutes(t, angular_momentum_squared(kappa), J[2]);
  return t;
}

Table sw_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const ObservableParams op = spec.observable_params();
  const Observable& H = spec.hamiltonian();
  std::vector<Observable> KJ, Kd;
  for (int i = 1; i <= 3; ++i) {
    KJ.push_back(sw_KJ(i, op));
    Kd.push_back(fradkin_K(i, i, op));
  }
  Table t;
  for (const auto& f : KJ) add_commutes(t, f, H);
  for (const auto& f : Kd) add_commutes(t, f, H);
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    add_commutes(t, KJ[i - 1], (KJ[std::min(j, k) - 1] + KJ[std::max(j, k) - 1])
                                   .renamed("KJ" + idx(std::min(j, k)) + " + KJ" +
                                            idx(std::max(j, k))));
  }
  const double ksum = op.k1 + op.k2 + op.k3;
  t.push_back({"H = (K11 + K22 + K33 + kappa (KJ1 + KJ2 + KJ3))/2 + kappa (k1 + k2 + k3)",
               [Kd, KJ, H, kappa, ksum](const PhaseState& s, Rng&) {
                 return sum_identity({0.5 * Kd[0](s), 0.5 * Kd[1](s), 0.5 * Kd[2](s),
                                      0.5 * kappa * KJ[0](s), 0.5 * kappa * KJ[1](s),
                                      0.5 * kappa * KJ[2](s), kappa * ksum},
                                     H(s));
               }});
  for (int i = 0; i < 3; ++i) add_commutes(t, Kd[i], KJ[i]);
  add_triplet_family(t, kappa, Kd, KJ, KJ, "KJ");
  add_coordinate_pairing(t, kappa);
  return t;
}

Table osc112_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const Osc112Observables o = osc112_observables(spec.observable_params());
  const Observable& H = spec.hamiltonian();
  Table t;
  for (const auto& f : {o.K_3, o.K_J3, o.K_12, o.K_RL1, o.K_RL2}) add_commutes(t, f, H);
  add_commutes(t, o.K_3, o.K_J3);
  add_commutes(t, o.K_J3, o.K_12);
  add_commutes(t, o.K_12, o.K_3);
  t.push_back({"H = (K3 + K12 + kappa KJ3)/2", [o, H, kappa](const PhaseState& s, Rng&) {
                 return sum_identity({0.5 * o.K_3(s), 0.5 * o.K_12(s), 0.5 * kappa * o.K_J3(s)},
                                     H(s));
               }});
  return t;
}

Table kepler_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const double k = spec.params().k;
  const Observable& H = spec.hamiltonian();
  std::vector<Observable> J, R;
  for (int i = 1; i <= 3; ++i) {
    J.push_back(angular_J(i, kappa));
    R.push_back(kepler_RL(i, kappa, k));
  }
  const Observable Jsq = angular_momentum_squared(kappa);
  Table t;
  for (const auto& f : J) add_commutes(t, f, H);
  for (const auto& f : R) add_commutes(t, f, H);
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int l = next(j);
    const Observable Jl = J[l - 1];
    add_bracket(t,
                "{KRL" + idx(i) + ", KRL" + idx(j) + "} = -2 J" + idx(l) +
                    " (H - kappa J^2)",
                R[i - 1], R[j - 1], [Jl, H, Jsq, kappa](const PhaseState& s) {
                  return -2.0 * Jl(s) * (H(s) - kappa * Jsq(s));
                });
  }
  add_vector_family(t, kappa, R, "KRL");
  add_commutes(t, H, Jsq);
  return t;
}

Table kepler123_table(const SystemSpec& spec) {
  const double kappa = spec.kappa();
  const ObservableParams op = spec.observable_params();
  const Observable& H = spec.hamiltonian();
  std::vector<Observable> KJ;
  for (int i = 1; i <= 3; ++i) KJ.push_back(sw_KJ(i, op));
  Table t;
  for (const auto& f : KJ) add_commutes(t, f, H);
  for (int i = 1; i <= 3; ++i) {
    const int j = next(i);
    const int k = next(j);
    add_commutes(t, KJ[i - 1], (KJ[std::min(j, k) - 1] + KJ[std::max(j, k) - 1])
                                   .renamed("KJ" + idx(std::min(j, k)) + " + KJ" +
                                            idx(std::max(j, k))));
  }
  for (int i = 1; i <= 3; ++i) {
    const double ki = op.coupling(i);
    const Observable R = k123_R(i, op);
    const Observable Q = radial_ratio(i, kappa);
    const Observable lambda = k123_lambda(i, kappa);
    add_bracket(t, "{R" + idx(i) + ", H} = -2 k" + idx(i) + " lambda" + idx(i) + " Q" + idx(i),
                R, H, [ki, lambda, Q](const PhaseState& s) { return -2.0 * ki * lambda(s) * Q(s); });
    add_bracket(t, "{Q" + idx(i) + ", H} = lambda" + idx(i) + " R" + idx(i), Q, H,
                [lambda, R](const PhaseState& s) { return lambda(s) * R(s); });
  }
  for (int i = 1; i <= 3; ++i) {
    if (op.coupling(i) >= 0.0) add_commutes(t, k123_KR(i, op), H);
  }
  add_radial_identity(t, kappa);
  return t;
}

}  // namespace

std::vector<BracketIdentity> bracket_identities(const SystemSpec& spec) {
  switch (spec.id()) {
    case SystemId::free:
      return free_table(spec);
    case SystemId::oscillator:
      return oscillator_table(spec);
    case SystemId::sw:
      return sw_table(spec);
    case SystemId::osc112:
      return osc112_table(spec);
    case SystemId::kepler:
      return kepler_table(spec);
    case SystemId::kepler123:
      return kepler123_table(spec);
  }
  return {};
}

std::vector<BracketResidual> bracket_table_audit(const SystemSpec& spec, int n_states, Rng& rng,
                                                 const SamplingOptions& opts) {
  const std::vector<BracketIdentity> table = bracket_identities(spec);
  std::vector<BracketResidual> out(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) out[i].identity = table[i].name;

  std::vector<IdentityValue> values(table.size());
  int accepted = 0;
  int attempts = 0;
  while (accepted < n_states) {
    if (++attempts > 100 * std::max(n_states, 1)) {
      throw DomainSingularity("bracket audit could not find enough admissible states");
    }
    const PhaseState s = sample_state(spec, rng, opts);
    try {
      for (std::size_t i = 0; i < table.size(); ++i) values[i] = table[i].eval(s, rng);
    } catch (const DomainSingularity&) {
      continue;
    }
    ++accepted;
    for (std::size_t i = 0; i < table.size(); ++i) {
      BracketResidual& r = out[i];
      ++r.samples;
      if (r.samples == 1 || values[i].residual() > r.residual) {
        r.state = s;
        r.expected = values[i].expected;
        r.computed = values[i].computed;
        r.residual = values[i].residual();
        r.scale = values[i].scale;
      }
    }
  }
  return out;
}

// --- closed orbits ------------------------------------------------------------------

namespace {

struct OrbitTracker {
  std::vector<double> times;
  std::vector<PhaseVector> states;
  PhaseVector lo{}, hi{};

  void add(double t, const PhaseVector& y) {
    if (states.empty()) {
      lo = hi = y;
    } else {
      for (std::size_t i = 0; i < kPhaseDim; ++i) {
        lo[i] = std::min(lo[i], y[i]);
        hi[i] = std::max(hi[i], y[i]);
      }
    }
    times.push_back(t);
    states.push_back(y);
  }

  double distance(const PhaseVector& a, const PhaseVector& b) const {
    double widest = 0.0;
    PhaseVector range{};
    for (std::size_t i = 0; i < kPhaseDim; ++i) {
      range[i] = hi[i] - lo[i];
      if (i == 2) range[i] = std::min(range[i], 2.0 * std::numbers::pi);
      widest = std::max(widest, range[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < kPhaseDim; ++i) {
      double d = a[i] - b[i];
      if (i == 2) d = std::remainder(d, 2.0 * std::numbers::pi);
      const double scale = std::max(range[i], 1e-3 * widest);
      sum += (d / scale) * (d / scale);
    }
    return std::sqrt(sum);
  }
};

}  // namespace

ClosedOrbitResult closed_orbit_check(const SystemSpec& spec, const PhaseState& s0, double t_max,
                                     const ClosedOrbitOptions& opts) {
  IntegratorOptions io;
  io.method = Method::rk45_adaptive;
  io.tol = opts.tol;
  const OdeRhs rhs = [&spec](const PhaseVector& v) { return hamilton_rhs(spec, from_vector(v)); };
  const StepCheck check = [&spec](const PhaseVector& a, const PhaseVector& b) {
    return step_violation(spec, a, b);
  };
  const PhaseVector y0 = to_vector(s0);

  OrbitTracker track;
  track.add(0.0, y0);
  int sign_changes = 0;
  const int needed = 2 * opts.min_radial_turns;
  double best = std::numeric_limits<double>::infinity();
  ClosedOrbitResult result;
  bool escaped = false;

  // Distance to y0 at time t, re-integrating from stored step `from`.
  auto distance_at = [&](std::size_t from, double t) {
    const double dt = t - track.times[from];
    PhaseVector y = track.states[from];
    if (dt > 0.0) {
      OdeSolution piece = integrate_ode(rhs, y, dt, io, check);
      if (piece.truncated) throw DomainSingularity(piece.truncation_reason);
      y = piece.states.back();
    }
    return track.distance(y, y0);
  };

  const StepObserver observer = [&](double t, const PhaseVector& y) {
    const PhaseVector& prev = track.states.back();
    if ((prev[3] > 0.0) != (y[3] > 0.0)) ++sign_changes;
    track.add(t, y);
    if (spec.kappa() <= 0.0 && y[0] > opts.r_bound) {
      escaped = true;
      return false;
    }
    const std::size_t n = track.states.size();
    if (sign_changes < needed || n < 3) return true;
    const double d0 = track.distance(track.states[n - 3], y0);
    const double d1 = track.distance(track.states[n - 2], y0);
    const double d2 = track.distance(y, y0);
    if (!(d1 <= d0 && d1 <= d2)) return true;

    // Golden-section refinement of the local minimum on [t_{n-3}, t_{n-1}].
    const std::size_t from = n - 3;
    double a = track.times[n - 3];
    double b = track.times[n - 1];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = distance_at(from, c);
    double fd = distance_at(from, d);
    for (int it = 0; it < 60 && (b - a) > 1e-13 * std::max(1.0, b); ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = distance_at(from, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = distance_at(from, d);
      }
    }
    const double tm = fc < fd ? c : d;
    const double dm = std::min({fc, fd, d1});
    if (dm < best) {
      best = dm;
      result.return_distance = dm;
      result.period_estimate = dm == d1 ? track.times[n - 2] : tm;
    }
    if (dm < opts.delta) {
      result.is_closed = true;
      return false;
    }
    return true;
  };

  const OdeSolution sol = integrate_ode(rhs, y0, t_max, io, check, observer);
  if (escaped) {
    throw Unbounded("orbit left the region r < " + std::to_string(opts.r_bound));
  }
  if (result.is_closed) return result;
  if (sol.truncated) throw DomainSingularity("orbit integration truncated: " + sol.truncation_reason);
  throw NoReturn("no return within t_max = " + std::to_string(t_max) +
                     " (best normalized distance " + std::to_string(best) + ")",
                 best);
}

}  // namespace curvedyn
