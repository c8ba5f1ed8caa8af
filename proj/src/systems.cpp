#include "curvedyn/systems.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>

#include "curvedyn/detail/guard.hpp"
#include "curvedyn/errors.hpp"

namespace curvedyn {

using detail::nonzero;

std::string_view to_string(SystemId id) {
  switch (id) {
    case SystemId::free:
      return "free";
    case SystemId::oscillator:
      return "oscillator";
    case SystemId::sw:
      return "sw";
    case SystemId::osc112:
      return "osc112";
    case SystemId::kepler:
      return "kepler";
    case SystemId::kepler123:
      return "kepler123";
  }
  return "unknown";
}

const std::vector<SystemId>& all_systems() {
  static const std::vector<SystemId> ids{SystemId::free,   SystemId::oscillator,
                                         SystemId::sw,     SystemId::osc112,
                                         SystemId::kepler, SystemId::kepler123};
  return ids;
}

SystemId system_from_string(std::string_view name) {
  for (SystemId id : all_systems()) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown system '" + std::string(name) +
                    "' (expected free, oscillator, sw, osc112, kepler or kepler123)");
}

std::vector<std::string> parameter_names(SystemId id) {
  switch (id) {
    case SystemId::free:
      return {"kappa"};
    case SystemId::oscillator:
      return {"kappa", "alpha"};
    case SystemId::sw:
      return {"kappa", "alpha", "k1", "k2", "k3"};
    case SystemId::osc112:
      return {"kappa", "alpha", "k1", "k2"};
    case SystemId::kepler:
      return {"kappa", "k"};
    case SystemId::kepler123:
      return {"kappa", "k", "k1", "k2", "k3"};
  }
  return {};
}

bool is_quartic(std::string_view name) {
  return name.size() == 3 && name.substr(0, 2) == "KR" && name[2] >= '1' && name[2] <= '3';
}

namespace {

void validate(SystemId id, const SystemParams& p) {
  const std::vector<std::string> used = parameter_names(id);
  auto uses = [&used](const char* n) {
    for (const auto& u : used)
      if (u == n) return true;
    return false;
  };
  const std::pair<const char*, double> all[] = {
      {"kappa", p.kappa}, {"alpha", p.alpha}, {"k", p.k},
      {"k1", p.k1},       {"k2", p.k2},       {"k3", p.k3}};
  for (const auto& [n, v] : all) {
    if (!std::isfinite(v)) throw ConfigError(std::string("parameter ") + n + " must be finite");
    if (!uses(n) && v != 0.0) {
      throw ConfigError(std::string("system ") + std::string(to_string(id)) +
                        " does not use parameter " + n + " (got " + std::to_string(v) + ")");
    }
  }
  if (p.alpha < 0.0) throw ConfigError("alpha must be >= 0");
  if (id != SystemId::kepler123) {
    for (const auto& [n, v] : {std::pair{"k1", p.k1}, {"k2", p.k2}, {"k3", p.k3}}) {
      if (v < 0.0) throw ConfigError(std::string(n) + " must be >= 0");
    }
  }
}

Jet nonlinear_terms(const PhaseFrame& f, double k1, double k2, double k3) {
  Jet out(0.0);
  if (k1 != 0.0) out += k1 / sqr(f.coord_nonzero(1));
  if (k2 != 0.0) out += k2 / sqr(f.coord_nonzero(2));
  if (k3 != 0.0) out += k3 / sqr(f.coord_nonzero(3));
  return out;
}

Observable make_potential(SystemId id, const SystemParams& p, bool with_k3 = true) {
  const double a2 = p.alpha * p.alpha;
  const double k = p.k;
  const double k1 = p.k1;
  const double k2 = p.k2;
  const double k3 = with_k3 ? p.k3 : 0.0;
  Observable::Fn fn;
  switch (id) {
    case SystemId::free:
      fn = [](const PhaseFrame&) { return Jet(0.0); };
      break;
    case SystemId::oscillator:
      fn = [a2](const PhaseFrame& f) { return 0.5 * a2 * sqr(f.tan_r()); };
      break;
    case SystemId::sw:
      fn = [a2, k1, k2, k3](const PhaseFrame& f) {
        return 0.5 * a2 * sqr(f.tan_r()) + nonlinear_terms(f, k1, k2, k3);
      };
      break;
    case SystemId::osc112: {
      ObservableParams op{p.kappa, p.alpha, 0.0, 0.0, 0.0, 0.0};
      Observable v112 = osc112_observables(op).V_112;
      fn = [v112, k1, k2](const PhaseFrame& f) {
        return v112.jet(f) + nonlinear_terms(f, k1, k2, 0.0);
      };
      break;
    }
    case SystemId::kepler:
      // k / Tan_k(r) written as k Cos/Sin, finite across Cos_k(r) = 0 on the sphere.
      fn = [k](const PhaseFrame& f) { return k * f.cot_r(); };
      break;
    case SystemId::kepler123:
      fn = [k, k1, k2, k3](const PhaseFrame& f) {
        return k * f.cot_r() + nonlinear_terms(f, k1, k2, k3);
      };
      break;
  }
  return {"V", p.kappa, std::move(fn)};
}

Observable sum_of(std::vector<Observable> terms, std::string name) {
  Observable out = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) out = out + terms[i];
  return out.renamed(std::move(name));
}

std::string idx(int i) { return std::to_string(i); }

// The two indices other than i, in increasing order.
std::pair<int, int> others(int i) {
  if (i == 1) return {2, 3};
  if (i == 2) return {1, 3};
  return {1, 2};
}

}  // namespace

ObservableParams SystemSpec::observable_params() const {
  return {params_.kappa, params_.alpha, params_.k, params_.k1, params_.k2, params_.k3};
}

SystemSpec::SystemSpec(SystemId id, SystemParams params)
    : id_(id),
      params_(params),
      hamiltonian_("H", params.kappa, nullptr),
      potential_("V", params.kappa, nullptr) {
  validate(id, params);
  const double kappa = params.kappa;
  potential_ = make_potential(id, params);
  {
    Observable V = potential_;
    hamiltonian_ = Observable("H", kappa,
                              [V](const PhaseFrame& f) { return f.kinetic() + V.jet(f); });
  }
  const Observable& H = hamiltonian_;
  const ObservableParams op = observable_params();
  auto J = [kappa](int i) { return angular_J(i, kappa); };
  const Observable Jsq = angular_momentum_squared(kappa);

  auto central_involution = [&] {
    involution_.push_back({"H, Jsq, J3", {H, Jsq, J(3)}});
  };
  // (H, K_Ji, K_Jj + K_Jk) for the systems whose angular integrals are K_Ji.
  auto kj_involutions = [&] {
    for (int i = 1; i <= 3; ++i) {
      const auto [j, l] = others(i);
      Observable pair = (sw_KJ(j, op) + sw_KJ(l, op)).renamed("KJ" + idx(j) + "+KJ" + idx(l));
      involution_.push_back({"H, KJ" + idx(i) + ", KJ" + idx(j) + "+KJ" + idx(l),
                             {H, sw_KJ(i, op), pair}});
    }
  };

  switch (id) {
    case SystemId::free: {
      for (int i = 1; i <= 3; ++i) integrals_.push_back(noether_P(i, kappa));
      for (int i = 1; i <= 3; ++i) integrals_.push_back(J(i));
      central_involution();
      independence_.push_back({"P1, P2, P3, J1, J2",
                               {noether_P(1, kappa), noether_P(2, kappa), noether_P(3, kappa),
                                J(1), J(2)}});
      break;
    }
    case SystemId::oscillator: {
      for (int i = 1; i <= 3; ++i) integrals_.push_back(J(i));
      for (int i = 1; i <= 3; ++i) integrals_.push_back(fradkin_K(i, i, op));
      integrals_.push_back(fradkin_K(1, 2, op));
      integrals_.push_back(fradkin_K(2, 3, op));
      integrals_.push_back(fradkin_K(3, 1, op));
      central_involution();
      for (int i = 1; i <= 3; ++i) {
        const auto [j, l] = others(i);
        Observable rest = sum_of({fradkin_K(j, j, op), fradkin_K(l, l, op),
                                  kappa * (square(J(j)) + square(J(l)))},
                                 "K" + idx(j) + idx(j) + "+K" + idx(l) + idx(l) + "+k(J" +
                                     idx(j) + "^2+J" + idx(l) + "^2)");
        involution_.push_back({"K" + idx(i) + idx(i) + ", J" + idx(i) + ", " + rest.name(),
                               {fradkin_K(i, i, op), J(i), rest}});
      }
      // K11 K22 - K12^2 = alpha^2 J3^2 ties K11, K22, K12 and J3 together.
      independence_.push_back({"K11, K22, K33, J1, J3",
                               {fradkin_K(1, 1, op), fradkin_K(2, 2, op), fradkin_K(3, 3, op),
                                J(1), J(3)}});
      break;
    }
    case SystemId::sw: {
      for (int i = 1; i <= 3; ++i) integrals_.push_back(sw_KJ(i, op));
      for (int i = 1; i <= 3; ++i) integrals_.push_back(fradkin_K(i, i, op));
      kj_involutions();
      for (int i = 1; i <= 3; ++i) {
        const auto [j, l] = others(i);
        Observable rest = sum_of({fradkin_K(j, j, op), fradkin_K(l, l, op),
                                  kappa * (sw_KJ(j, op) + sw_KJ(l, op))},
                                 "K" + idx(j) + idx(j) + "+K" + idx(l) + idx(l) + "+k(KJ" +
                                     idx(j) + "+KJ" + idx(l) + ")");
        involution_.push_back({"K" + idx(i) + idx(i) + ", KJ" + idx(i) + ", " + rest.name(),
                               {fradkin_K(i, i, op), sw_KJ(i, op), rest}});
      }
      independence_.push_back({"KJ1, KJ2, KJ3, K11, K22",
                               {sw_KJ(1, op), sw_KJ(2, op), sw_KJ(3, op), fradkin_K(1, 1, op),
                                fradkin_K(2, 2, op)}});
      break;
    }
    case SystemId::osc112: {
      Osc112Observables o = osc112_observables(op);
      integrals_ = {o.K_3, o.K_J3, o.K_12, o.K_RL1, o.K_RL2};
      involution_.push_back({"H, K3, KJ3, K12", {H, o.K_3, o.K_J3, o.K_12}});
      independence_.push_back({"K3, KJ3, K12, KRL1, KRL2", integrals_});
      break;
    }
    case SystemId::kepler: {
      for (int i = 1; i <= 3; ++i) integrals_.push_back(J(i));
      for (int i = 1; i <= 3; ++i) integrals_.push_back(kepler_RL(i, kappa, params.k));
      central_involution();
      independence_.push_back({"J1, J2, J3, KRL1, KRL2",
                               {J(1), J(2), J(3), kepler_RL(1, kappa, params.k),
                                kepler_RL(2, kappa, params.k)}});
      break;
    }
    case SystemId::kepler123: {
      for (int i = 1; i <= 3; ++i) integrals_.push_back(sw_KJ(i, op));
      for (int i = 1; i <= 3; ++i) {
        if (op.coupling(i) >= 0.0) integrals_.push_back(k123_KR(i, op));
      }
      kj_involutions();
      if (params.k1 >= 0.0 && params.k2 >= 0.0) {
        independence_.push_back({"KJ1, KJ2, KJ3, KR1, KR2",
                                 {sw_KJ(1, op), sw_KJ(2, op), sw_KJ(3, op), k123_KR(1, op),
                                  k123_KR(2, op)}});
      }
      break;
    }
  }
}

std::vector<std::string> SystemSpec::observable_names() const {
  std::vector<std::string> names{"H", "V", "T", "P1", "P2", "P3", "J1", "J2", "J3",
                                 "Jsq", "Psq", "x", "y", "z", "prS"};
  auto add = [&names](std::initializer_list<const char*> more) {
    for (const char* n : more) names.emplace_back(n);
  };
  switch (id_) {
    case SystemId::free:
      break;
    case SystemId::oscillator:
      add({"K11", "K22", "K33", "K12", "K23", "K31", "lambda", "ReM1", "ImM1", "ReM2", "ImM2",
           "ReM3", "ImM3"});
      break;
    case SystemId::sw:
      add({"K11", "K22", "K33", "KJ1", "KJ2", "KJ3"});
      break;
    case SystemId::osc112:
      add({"K3", "KJ3", "K12", "KRL1", "KRL2", "Az", "V112"});
      break;
    case SystemId::kepler:
      add({"KRL1", "KRL2", "KRL3"});
      break;
    case SystemId::kepler123:
      add({"KJ1", "KJ2", "KJ3", "KRL1", "KRL2", "KRL3", "R1", "R2", "R3", "KR1", "KR2", "KR3",
           "Q1", "Q2", "Q3", "lambda1", "lambda2", "lambda3"});
      break;
  }
  return names;
}

Observable SystemSpec::observable(std::string_view name) const {
  const double kappa = params_.kappa;
  const ObservableParams op = observable_params();
  const std::string n(name);
  auto index_of = [&n](std::size_t prefix) -> int {
    if (n.size() != prefix + 1) return 0;
    const char c = n[prefix];
    return (c >= '1' && c <= '3') ? c - '0' : 0;
  };
  bool known = false;
  for (const auto& candidate : observable_names()) known = known || candidate == n;
  if (!known) {
    throw ConfigError("system " + std::string(to_string(id_)) + " has no observable '" + n +
                      "' (see list-observables)");
  }

  if (n == "H") return hamiltonian_;
  if (n == "V") return potential_;
  if (n == "T") return kinetic_energy(kappa);
  if (n == "Jsq") return angular_momentum_squared(kappa);
  if (n == "Psq") return noether_P_squared(kappa);
  if (n == "prS") return radial_momentum_sin(kappa);
  if (n == "x") return kappa_coordinate(1, kappa);
  if (n == "y") return kappa_coordinate(2, kappa);
  if (n == "z") return kappa_coordinate(3, kappa);
  if (n == "lambda") return oscillator_lambda(kappa);
  if (int i = index_of(1); n[0] == 'P' && i) return noether_P(i, kappa);
  if (int i = index_of(1); n[0] == 'J' && i) return angular_J(i, kappa);
  if (int i = index_of(2); n.rfind("KJ", 0) == 0 && i) return sw_KJ(i, op);
  if (int i = index_of(3); n.rfind("ReM", 0) == 0 && i) {
    return complex_M(i, kappa, params_.alpha).re;
  }
  if (int i = index_of(3); n.rfind("ImM", 0) == 0 && i) {
    return complex_M(i, kappa, params_.alpha).im;
  }
  if (int i = index_of(6); n.rfind("lambda", 0) == 0 && i) return k123_lambda(i, kappa);

  if (id_ == SystemId::osc112) {
    Osc112Observables o = osc112_observables(op);
    if (n == "K3") return o.K_3;
    if (n == "K12") return o.K_12;
    if (n == "KRL1") return o.K_RL1;
    if (n == "KRL2") return o.K_RL2;
    if (n == "Az") return o.A_z;
    if (n == "V112") return o.V_112;
  }
  if (int i = index_of(3); n.rfind("KRL", 0) == 0 && i) return kepler_RL(i, kappa, params_.k);
  if (int i = index_of(2); n.rfind("KR", 0) == 0 && i) return k123_KR(i, op);
  if (int i = index_of(1); n[0] == 'R' && i) return k123_R(i, op);
  if (int i = index_of(1); n[0] == 'Q' && i) return radial_ratio(i, kappa);
  if (n.size() == 3 && n[0] == 'K') {
    const int i = n[1] - '0';
    const int j = n[2] - '0';
    return fradkin_K(i, j, op);
  }
  throw ConfigError("observable '" + n + "' is not resolvable");
}

double hamiltonian(const SystemSpec& spec, const PhaseState& s) { return spec.hamiltonian()(s); }

PhaseVector hamilton_rhs(const SystemSpec& spec, const PhaseState& s) {
  const Gradient g = spec.hamiltonian().gradient(s);
  return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

double potential(const SystemSpec& spec, const ConfigPoint& q) {
  return spec.potential()(PhaseState{q, 0.0, 0.0, 0.0});
}

std::vector<ProfileRow> potential_profile(const SystemSpec& spec, double r_min, double r_max,
                                          int n) {
  if (n < 1) throw ConfigError("profile needs at least one sample");
  if (!(r_max >= r_min)) throw ConfigError("profile range needs r_max >= r_min");
  const Observable V = make_potential(spec.id(), spec.params(), false);
  std::vector<ProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = n == 1 ? r_min : r_min + (r_max - r_min) * i / (n - 1);
    ProfileRow row{r, 0.0, true, {}};
    const ConfigPoint q{r, std::numbers::pi / 2, std::numbers::pi / 4};
    if (!is_valid(spec.kappa(), q)) {
      row.valid = false;
      row.V = std::numeric_limits<double>::quiet_NaN();
      row.note = "r outside the chart";
      rows.push_back(std::move(row));
      continue;
    }
    try {
      row.V = V(PhaseState{q, 0.0, 0.0, 0.0});
      if (!std::isfinite(row.V)) {
        row.valid = false;
        row.note = "non-finite value";
      }
    } catch (const DomainSingularity& e) {
      row.valid = false;
      row.V = std::numeric_limits<double>::quiet_NaN();
      row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Jet chart_potential(const SystemSpec& spec, const std::array<Jet, kPhaseDim>& z,
                    RadialChart chart) {
  const double kappa = spec.kappa();
  const double a2 = spec.params().alpha * spec.params().alpha;
  const double k = spec.params().k;
  const Jet& x = z[0];
  switch (spec.id()) {
    case SystemId::free:
      return Jet(0.0);
    case SystemId::oscillator:
      if (chart == RadialChart::rho) {
        const Jet d = 1.0 - kappa * sqr(x);
        nonzero(d.v, "1 - kappa rho^2");
        return 0.5 * a2 * sqr(x) / d;
      }
      if (chart == RadialChart::tangent) return 0.5 * a2 * sqr(x);
      break;
    case SystemId::kepler:
      nonzero(x.v, "radial coordinate");
      if (chart == RadialChart::rho) return k * sqrt(1.0 - kappa * sqr(x)) / x;
      if (chart == RadialChart::tangent) return k / x;
      break;
    default:
      break;
  }
  throw ConfigError("system " + std::string(to_string(spec.id())) +
                    " has no alternative-chart Hamiltonian");
}

Jet chart_hamiltonian_jet(const SystemSpec& spec, const ChartState& s) {
  if (s.chart == RadialChart::geodesic) {
    const Jet h = spec.hamiltonian().jet(from_chart(spec.kappa(), s));
    return h;
  }
  const std::array<Jet, kPhaseDim> z{
      Jet::variable(s.radial, 0),   Jet::variable(s.theta, 1),   Jet::variable(s.phi, 2),
      Jet::variable(s.p_radial, 3), Jet::variable(s.p_theta, 4), Jet::variable(s.p_phi, 5)};
  return chart_kinetic_jet(spec.kappa(), z, s.chart) + chart_potential(spec, z, s.chart);
}

}  // namespace

double chart_hamiltonian(const SystemSpec& spec, const ChartState& s) {
  return chart_hamiltonian_jet(spec, s).v;
}

PhaseVector chart_hamilton_rhs(const SystemSpec& spec, const ChartState& s) {
  const Gradient g = chart_hamiltonian_jet(spec, s).d;
  return {g[3], g[4], g[5], -g[0], -g[1], -g[2]};
}

}  // namespace curvedyn
