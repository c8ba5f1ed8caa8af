#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "curvedyn/errors.hpp"
#include "curvedyn/sampling.hpp"
#include "curvedyn/systems.hpp"
#include "oracle/transcription.hpp"

using namespace curvedyn;

namespace {

SystemParams params_for(SystemId id, double kappa) {
  SystemParams p;
  p.kappa = kappa;
  for (const auto& n : parameter_names(id)) {
    if (n == "alpha") p.alpha = 1.3;
    if (n == "k") p.k = -0.8;
    if (n == "k1") p.k1 = 0.15;
    if (n == "k2") p.k2 = 0.25;
    if (n == "k3") p.k3 = 0.35;
  }
  return p;
}

class OracleAgreement : public ::testing::TestWithParam<std::tuple<SystemId, double>> {};

}  // namespace

TEST_P(OracleAgreement, EveryObservable) {
  const auto [id, kappa] = GetParam();
  const SystemParams sp = params_for(id, kappa);
  const SystemSpec spec(id, sp);
  const oracle::Params op{sp.kappa, sp.alpha, sp.k, sp.k1, sp.k2, sp.k3};
  const std::string sys(to_string(id));
  Rng rng(51);

  const std::vector<std::string> names = spec.observable_names();
  for (int n = 0; n < 50; ++n) {
    const PhaseState s = sample_state(spec, rng);
    const oracle::State os{s.q.r, s.q.theta, s.q.phi, s.p_r, s.p_theta, s.p_phi};
    for (const auto& name : names) {
      double lib = 0.0;
      try {
        lib = name == "H" ? spec.hamiltonian()(s) : name == "V" ? spec.potential()(s) : spec.observable(name)(s);
      } catch (const DomainSingularity&) {
        continue;
      }
      const double ref = oracle::eval(sys, op, name, os);
      EXPECT_LE(std::abs(lib - ref) / std::max(1.0, std::abs(ref)), 1e-12)
          << sys << " kappa=" << kappa << " " << name << " lib=" << lib << " oracle=" << ref;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllSystems, OracleAgreement,
    ::testing::Combine(::testing::Values(SystemId::free, SystemId::oscillator, SystemId::sw,
                                         SystemId::osc112, SystemId::kepler, SystemId::kepler123),
                       ::testing::Values(-1.0, -0.3, 0.0, 0.7, 1.0)),
    [](const auto& info) {
      const double k = std::get<1>(info.param);
      std::string ks = k < 0 ? "m" : "p";
      ks += std::to_string(static_cast<int>(std::round(std::abs(k) * 10)));
      return std::string(to_string(std::get<0>(info.param))) + "_kappa_" + ks;
    });

TEST(Oracle, UnknownNameIsAnError) {
  EXPECT_THROW(oracle::eval("free", {}, "K11", {1, 1, 1, 0, 0, 0}), std::invalid_argument);
}
