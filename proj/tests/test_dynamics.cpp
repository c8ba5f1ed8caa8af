#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvedyn/dynamics.hpp"
#include "curvedyn/errors.hpp"
#include "curvedyn/sampling.hpp"

using namespace curvedyn;

namespace {

// Three uncoupled unit-frequency rotations: y = (q1, q2, q3, p1, p2, p3).
PhaseVector rotation(const PhaseVector& y) { return {y[3], y[4], y[5], -y[0], -y[1], -y[2]}; }

const PhaseVector kY0{1.0, 0.0, 0.5, 0.0, 1.0, -0.3};

double max_error_at(double t, const PhaseVector& y) {
  double e = 0.0;
  const double c = std::cos(t), s = std::sin(t);
  for (int i = 0; i < 3; ++i) {
    e = std::max(e, std::abs(y[i] - (kY0[i] * c + kY0[i + 3] * s)));
    e = std::max(e, std::abs(y[i + 3] - (kY0[i + 3] * c - kY0[i] * s)));
  }
  return e;
}

double energy(const PhaseVector& y) {
  double e = 0.0;
  for (double v : y) e += 0.5 * v * v;
  return e;
}

SystemSpec osc(double kappa, double alpha) {
  SystemParams p;
  p.kappa = kappa;
  p.alpha = alpha;
  return {SystemId::oscillator, p};
}

}  // namespace

TEST(Brackets, AntisymmetryAndCanonicalPairs) {
  Rng rng(31);
  const SystemSpec spec = osc(-0.6, 1.0);
  for (int n = 0; n < 20; ++n) {
    const PhaseState s = sample_state(spec, rng);
    const Observable& H = spec.hamiltonian();
    for (const Observable& f : spec.integrals()) {
      EXPECT_NEAR(poisson_bracket(f, H, s), -poisson_bracket(H, f, s), 1e-15);
      EXPECT_DOUBLE_EQ(poisson_bracket(f, f, s), 0.0);
    }
  }
  // {J1, J2} = J3 and cyclic.
  const PhaseState s{{0.8, 1.2, 0.3}, 0.4, -0.2, 0.9};
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1, k = j % 3 + 1;
    EXPECT_NEAR(poisson_bracket(angular_J(i), angular_J(j), s), angular_J(k)(s), 1e-14);
  }
}

TEST(Brackets, AnalyticMatchesFiniteDifferences) {
  Rng rng(32);
  SamplingOptions opts;
  opts.margin = 0.2;
  for (double kappa : {-1.0, 0.0, 0.7}) {
    const SystemSpec spec = osc(kappa, 1.2);
    for (int n = 0; n < 10; ++n) {
      const PhaseState s = sample_state(spec, rng, opts);
      const auto& I = spec.integrals();
      for (std::size_t a = 0; a + 1 < I.size(); ++a) {
        const double exact = poisson_bracket(I[a], I[a + 1], s);
        EXPECT_NEAR(poisson_bracket_fd(I[a], I[a + 1], s), exact, 1e-6 * std::max(1.0, std::abs(exact)))
            << I[a].name() << ", " << I[a + 1].name();
      }
    }
  }
}

TEST(Integrators, Names) {
  for (Method m : {Method::rk4_fixed, Method::rk45_adaptive, Method::implicit_midpoint})
    EXPECT_EQ(method_from_string(to_string(m)), m);
  EXPECT_THROW(method_from_string("euler"), ConfigError);
}

TEST(Integrators, Rk4IsFourthOrder) {
  IntegratorOptions o;
  o.method = Method::rk4_fixed;
  o.dt = 0.02;
  const double e1 = max_error_at(1.0, integrate_ode(rotation, kY0, 1.0, o).states.back());
  o.dt = 0.01;
  const auto sol = integrate_ode(rotation, kY0, 1.0, o);
  const double e2 = max_error_at(1.0, sol.states.back());
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.1);
  EXPECT_DOUBLE_EQ(sol.times.back(), 1.0);
}

TEST(Integrators, AdaptiveMeetsTolerance) {
  IntegratorOptions o;
  o.tol = 1e-10;
  const auto sol = integrate_ode(rotation, kY0, 7.3, o);
  EXPECT_DOUBLE_EQ(sol.times.back(), 7.3);
  EXPECT_FALSE(sol.truncated);
  EXPECT_EQ(sol.times.size(), sol.states.size());
  EXPECT_EQ(sol.diagnostics.size() + 1, sol.states.size());
  for (const auto& d : sol.diagnostics) EXPECT_LE(d.error_estimate, 1.0 + 1e-12);
  EXPECT_LT(max_error_at(7.3, sol.states.back()), 1e-8);
}

TEST(Integrators, ImplicitMidpointKeepsQuadraticInvariants) {
  IntegratorOptions o;
  o.method = Method::implicit_midpoint;
  o.dt = 0.1;
  const auto sol = integrate_ode(rotation, kY0, 100.0, o);
  const double e0 = energy(kY0);
  for (const auto& y : sol.states) EXPECT_NEAR(energy(y), e0, 1e-11);
  for (const auto& d : sol.diagnostics) EXPECT_GE(d.iterations, 1);

  o.implicit_max_iter = 1;
  EXPECT_THROW(integrate_ode(rotation, kY0, 1.0, o), NonConvergence);
}

TEST(Integrators, SingularRhsTruncates) {
  const OdeRhs f = [](const PhaseVector& y) {
    if (y[0] > 1.5) throw DomainSingularity("wall");
    return PhaseVector{1.0, 0, 0, 0, 0, 0};
  };
  for (Method m : {Method::rk45_adaptive, Method::rk4_fixed}) {
    IntegratorOptions o;
    o.method = m;
    o.dt = 0.01;
    const auto sol = integrate_ode(f, PhaseVector{}, 3.0, o);
    EXPECT_TRUE(sol.truncated) << to_string(m);
    EXPECT_FALSE(sol.truncation_reason.empty());
    EXPECT_LE(sol.times.back(), 1.5 + 1e-9);
    EXPECT_GT(sol.times.back(), 1.5 - 1e-6);
  }
}

TEST(Integrators, StepCheckAndObserver) {
  const OdeRhs f = [](const PhaseVector&) { return PhaseVector{1.0, 0, 0, 0, 0, 0}; };
  const StepCheck check = [](const PhaseVector&, const PhaseVector& to) -> std::optional<std::string> {
    if (to[0] > 2.0) return "past 2";
    return std::nullopt;
  };
  EXPECT_TRUE(integrate_ode(f, PhaseVector{}, 3.0, {}, check).truncated);

  int calls = 0;
  const StepObserver stop = [&calls](double t, const PhaseVector&) { return ++calls, t < 1.0; };
  const auto sol = integrate_ode(f, PhaseVector{}, 3.0, {}, {}, stop);
  EXPECT_GE(sol.times.back(), 1.0);
  EXPECT_LT(sol.times.back(), 3.0);
}

TEST(Integrators, RejectsBadOptions) {
  IntegratorOptions o;
  EXPECT_THROW(integrate_ode(rotation, kY0, 0.0, o), ConfigError);
  o.tol = 0.0;
  EXPECT_THROW(integrate_ode(rotation, kY0, 1.0, o), ConfigError);
  o = {};
  o.method = Method::rk4_fixed;
  o.dt = -1.0;
  EXPECT_THROW(integrate_ode(rotation, kY0, 1.0, o), ConfigError);
}

TEST(Conservation, KeplerFlowKeepsItsIntegrals) {
  SystemParams p;
  p.kappa = -1.0;
  p.k = -1.0;
  const SystemSpec spec(SystemId::kepler, p);
  const PhaseState s0{{1.0, 1.2, 0.3}, 0.1, 0.2, 0.5};
  const Trajectory traj = integrate(spec, s0, 20.0);
  ASSERT_FALSE(traj.truncated) << traj.truncation_reason;
  std::vector<Observable> obs{spec.hamiltonian()};
  for (const auto& f : spec.integrals()) obs.push_back(f);
  const ConservationReport rep = conservation_report(traj, obs);
  ASSERT_EQ(rep.rows.size(), 7u);
  for (const auto& row : rep.rows) {
    EXPECT_LT(row.max_rel_drift, 1e-9) << row.name;
    EXPECT_DOUBLE_EQ(row.max_rel_drift, row.max_abs_drift / std::max(std::abs(row.initial), 1.0));
  }
}

TEST(Conservation, StepViolationsCatchSignChanges) {
  SystemParams p;
  p.kappa = 0.5;
  p.k = -1.0;
  p.k1 = 0.1;
  const SystemSpec spec(SystemId::kepler123, p);
  PhaseVector a{1.0, 1.0, 1.5, 0, 0, 0}, b = a;
  b[2] = 1.6;  // phi crosses pi/2, so x changes sign
  EXPECT_TRUE(step_violation(spec, a, b).has_value());
  b[2] = 1.52;
  EXPECT_FALSE(step_violation(spec, a, b).has_value());
  b[1] = -0.1;
  EXPECT_TRUE(step_violation(spec, a, b).has_value());
}

TEST(Independence, RankOfKnownFamilies) {
  const SystemSpec spec = osc(0.5, 1.0);
  const PhaseState s{{0.7, 1.1, 0.4}, 0.3, -0.6, 0.8};
  const auto& set = spec.independence_sets().front().members;
  EXPECT_EQ(independence_rank(set, s).rank, 5);

  std::vector<Observable> dup(set.begin(), set.begin() + 4);
  dup.push_back(2.0 * set[0]);
  EXPECT_LE(independence_rank(dup, s).rank, 4);

  // det K = 0 ties the six Fradkin entries together.
  const std::vector<Observable> six{spec.observable("K11"), spec.observable("K22"),
                                    spec.observable("K33"), spec.observable("K12"),
                                    spec.observable("K23"), spec.observable("K31")};
  const RankResult r = independence_rank(six, s);
  EXPECT_EQ(r.rank, 5);
  ASSERT_EQ(r.singular_values.size(), 6u);
  EXPECT_TRUE(std::is_sorted(r.singular_values.rbegin(), r.singular_values.rend()));
}
