#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvedyn/audits.hpp"
#include "curvedyn/errors.hpp"

using namespace curvedyn;

namespace {

std::vector<SystemSpec> specs_at(double kappa) {
  std::vector<SystemSpec> out;
  for (SystemId id : all_systems()) {
    SystemParams p;
    p.kappa = kappa;
    for (const auto& n : parameter_names(id)) {
      if (n == "alpha") p.alpha = 1.3;
      if (n == "k") p.k = -1.0;
      if (n == "k1") p.k1 = 0.1;
      if (n == "k2") p.k2 = 0.2;
      if (n == "k3") p.k3 = 0.3;
    }
    out.emplace_back(id, p);
  }
  return out;
}

}  // namespace

TEST(Audits, IdentityValueResiduals) {
  IdentityValue v{1.0 + 1e-12, 1.0, 4.0};
  EXPECT_NEAR(v.residual(), 1e-12, 1e-16);
  EXPECT_NEAR(v.relative_residual(), 2.5e-13, 1e-16);
  EXPECT_DOUBLE_EQ((IdentityValue{0.0, 0.0, 0.0}).relative_residual(), 0.0);
}

TEST(Audits, BracketTablesHoldEverywhere) {
  for (double kappa : {-1.0, -0.3, 0.0, 0.7}) {
    for (const SystemSpec& spec : specs_at(kappa)) {
      Rng rng(41);
      const auto rows = bracket_table_audit(spec, 25, rng);
      EXPECT_FALSE(rows.empty());
      for (const auto& row : rows) {
        EXPECT_EQ(row.samples, 25);
        EXPECT_LE(row.residual / std::max(1.0, row.scale), 1e-10)
            << to_string(spec.id()) << " kappa=" << kappa << " " << row.identity;
      }
    }
  }
}

TEST(Audits, TablesCoverTheDisplayedIdentities) {
  const auto specs = specs_at(0.5);
  // free: six Casimir-type brackets plus the so(4)/so(3,1) table.
  EXPECT_GE(bracket_identities(specs[0]).size(), 15u);
  for (const SystemSpec& spec : specs) EXPECT_FALSE(bracket_identities(spec).empty());
}

TEST(Audits, FradkinMatrixProperties) {
  Rng rng(42);
  for (double kappa : {-1.0, 0.0, 0.9}) {
    SystemParams p;
    p.kappa = kappa;
    p.alpha = 1.4;
    const SystemSpec spec(SystemId::oscillator, p);
    for (int n = 0; n < 30; ++n) {
      const PhaseState s = sample_state(spec, rng);
      const auto rows = fradkin_audit(kappa, 1.4, s);
      EXPECT_EQ(rows.size(), 14u);
      for (const auto& r : rows) EXPECT_LT(r.value.relative_residual(), 1e-10) << r.identity;
    }
  }
}

TEST(ClosedOrbits, FreeGeodesicOnTheSphere) {
  SystemParams p;
  p.kappa = 1.0;
  const SystemSpec spec(SystemId::free, p);
  // Unit speed: 2H = p_r^2 + (p_theta^2 + p_phi^2 / sin^2 theta) / Sin^2 = 1.
  const double r = 1.0, th = 1.2, S = std::sin(r);
  const PhaseState s0{{r, th, 0.3}, 0.6, 0.48 * S, 0.64 * S * std::sin(th)};
  ASSERT_NEAR(hamiltonian(spec, s0), 0.5, 1e-15);
  const ClosedOrbitResult res = closed_orbit_check(spec, s0, 20.0);
  EXPECT_TRUE(res.is_closed);
  EXPECT_NEAR(res.period_estimate, 2 * std::numbers::pi, 1e-6);
  EXPECT_LT(res.return_distance, 1e-6);
}

TEST(ClosedOrbits, OscillatorAndKepler) {
  SystemParams p;
  p.kappa = -0.5;
  p.alpha = 1.0;
  EXPECT_TRUE(closed_orbit_check(SystemSpec(SystemId::oscillator, p), {{0.8, 1.2, 0.3}, 0.2, 0.3, 0.4}, 100.0)
                  .is_closed);
  SystemParams q;
  q.kappa = 0.3;
  q.k = -1.0;
  EXPECT_TRUE(closed_orbit_check(SystemSpec(SystemId::kepler, q), {{1.0, 1.2, 0.3}, 0.1, 0.3, 0.5}, 200.0)
                  .is_closed);
}

TEST(ClosedOrbits, FailureModes) {
  SystemParams p;
  p.kappa = 0.7;
  p.k = -1.0;
  const SystemSpec kepler(SystemId::kepler, p);
  const PhaseState s0{{1.0, 1.2, 0.3}, 0.1, 0.3, 0.5};
  try {
    closed_orbit_check(kepler, s0, 0.5);
    FAIL() << "expected NoReturn";
  } catch (const NoReturn& e) {
    EXPECT_GT(e.best_distance(), 1e-4);
  }

  SystemParams h;
  h.kappa = -1.0;
  const SystemSpec free(SystemId::free, h);
  EXPECT_THROW(closed_orbit_check(free, {{1.0, 1.2, 0.3}, 1.0, 0.0, 0.0}, 100.0), Unbounded);
}
