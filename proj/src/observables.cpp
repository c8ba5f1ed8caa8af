#include "curvedyn/observables.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "curvedyn/detail/guard.hpp"
#include "curvedyn/errors.hpp"

namespace curvedyn {

using detail::nonzero;

namespace {

void check_index(int i) {
  if (i < 1 || i > 3) throw std::out_of_range("component index must be 1, 2 or 3");
}

std::string idx(int i) { return std::to_string(i); }

}  // namespace

double ObservableParams::coupling(int i) const {
  check_index(i);
  return i == 1 ? k1 : (i == 2 ? k2 : k3);
}

// ---------------------------------------------------------------------------

PhaseFrame::PhaseFrame(double kappa, const PhaseState& s) : kappa_(kappa), state_(s) {
  const PhaseVector v = to_vector(s);
  for (std::size_t i = 0; i < kPhaseDim; ++i) vars_[i] = Jet::variable(v[i], i);
  sin_r_ = curvedyn::sin_k(kappa, vars_[0]);
  cos_r_ = curvedyn::cos_k(kappa, vars_[0]);
  sin_theta_ = sin(vars_[1]);
  cos_theta_ = cos(vars_[1]);
  sin_phi_ = sin(vars_[2]);
  cos_phi_ = cos(vars_[2]);
}

const Jet& PhaseFrame::tan_r() const {
  if (!tan_r_) {
    nonzero(cos_r_.v, "Cos_k(r)");
    tan_r_ = sin_r_ / cos_r_;
  }
  return *tan_r_;
}

const Jet& PhaseFrame::cot_r() const {
  if (!cot_r_) {
    nonzero(sin_r_.v, "Sin_k(r)");
    cot_r_ = cos_r_ / sin_r_;
  }
  return *cot_r_;
}

const Jet& PhaseFrame::cot_theta() const {
  if (!cot_theta_) {
    nonzero(sin_theta_.v, "sin(theta)");
    cot_theta_ = cos_theta_ / sin_theta_;
  }
  return *cot_theta_;
}

const Jet& PhaseFrame::direction(int i) const {
  check_index(i);
  auto& slot = direction_[i - 1];
  if (!slot) {
    if (i == 1) slot = sin_theta_ * cos_phi_;
    if (i == 2) slot = sin_theta_ * sin_phi_;
    if (i == 3) slot = cos_theta_;
  }
  return *slot;
}

const Jet& PhaseFrame::coord(int i) const {
  check_index(i);
  auto& slot = coord_[i - 1];
  if (!slot) slot = sin_r_ * direction(i);
  return *slot;
}

const Jet& PhaseFrame::coord_nonzero(int i) const {
  static constexpr const char* names[] = {"x_k", "y_k", "z_k"};
  const Jet& c = coord(i);
  nonzero(c.v, names[i - 1]);
  return c;
}

const Jet& PhaseFrame::P(int i) const {
  check_index(i);
  auto& slot = P_[i - 1];
  if (!slot) {
    const Jet& cot = cot_r();
    nonzero(sin_theta_.v, "sin(theta)");
    const Jet& pr = p_r();
    const Jet& pt = p_theta();
    const Jet& pp = p_phi();
    switch (i) {
      case 1:
        slot = direction(1) * pr +
               cot * (cos_theta_ * cos_phi_ * pt - (sin_phi_ / sin_theta_) * pp);
        break;
      case 2:
        slot = direction(2) * pr +
               cot * (cos_theta_ * sin_phi_ * pt + (cos_phi_ / sin_theta_) * pp);
        break;
      default:
        slot = cos_theta_ * pr - cot * sin_theta_ * pt;
        break;
    }
  }
  return *slot;
}

const Jet& PhaseFrame::J(int i) const {
  check_index(i);
  auto& slot = J_[i - 1];
  if (!slot) {
    const Jet& pt = p_theta();
    const Jet& pp = p_phi();
    switch (i) {
      case 1:
        slot = -(sin_phi_ * pt + cot_theta() * cos_phi_ * pp);
        break;
      case 2:
        slot = cos_phi_ * pt - cot_theta() * sin_phi_ * pp;
        break;
      default:
        slot = pp;
        break;
    }
  }
  return *slot;
}

const Jet& PhaseFrame::kinetic() const {
  if (!kinetic_) {
    nonzero(sin_r_.v, "Sin_k(r)");
    nonzero(sin_theta_.v, "sin(theta)");
    kinetic_ = 0.5 * (sqr(p_r()) + (sqr(p_theta()) + sqr(p_phi()) / sqr(sin_theta_)) /
                                       sqr(sin_r_));
  }
  return *kinetic_;
}

// ---------------------------------------------------------------------------

Observable::Observable(std::string name, double kappa, Fn fn)
    : name_(std::move(name)), kappa_(kappa), fn_(std::move(fn)) {}

Jet Observable::jet(const PhaseState& s) const {
  const PhaseFrame frame(kappa_, s);
  return fn_(frame);
}

Observable Observable::renamed(std::string name) const {
  Observable out = *this;
  out.name_ = std::move(name);
  return out;
}

namespace {

double common_kappa(const Observable& a, const Observable& b) {
  if (a.kappa() != b.kappa()) {
    throw std::invalid_argument("cannot combine observables " + a.name() + " and " + b.name() +
                                " defined at different curvatures");
  }
  return a.kappa();
}

}  // namespace

Observable operator+(const Observable& a, const Observable& b) {
  return {"(" + a.name() + " + " + b.name() + ")", common_kappa(a, b),
          [a, b](const PhaseFrame& f) { return a.jet(f) + b.jet(f); }};
}

Observable operator-(const Observable& a, const Observable& b) {
  return {"(" + a.name() + " - " + b.name() + ")", common_kappa(a, b),
          [a, b](const PhaseFrame& f) { return a.jet(f) - b.jet(f); }};
}

Observable operator*(const Observable& a, const Observable& b) {
  return {a.name() + "*" + b.name(), common_kappa(a, b),
          [a, b](const PhaseFrame& f) { return a.jet(f) * b.jet(f); }};
}

Observable operator*(double c, const Observable& a) {
  return {std::to_string(c) + "*" + a.name(), a.kappa(),
          [c, a](const PhaseFrame& f) { return c * a.jet(f); }};
}

Observable square(const Observable& a) {
  return {a.name() + "^2", a.kappa(), [a](const PhaseFrame& f) { return sqr(a.jet(f)); }};
}

Observable constant(double value, double kappa) {
  return {std::to_string(value), kappa, [value](const PhaseFrame&) { return Jet(value); }};
}

Gradient analytic_gradient(const Observable& obs, const PhaseState& s) {
  return obs.gradient(s);
}

std::complex<double> ComplexObservable::operator()(const PhaseState& s) const {
  return {re(s), im(s)};
}

// --- free motion -------------------------------------------------------------

Observable noether_P(int i, double kappa) {
  check_index(i);
  return {"P" + idx(i), kappa, [i](const PhaseFrame& f) { return f.P(i); }};
}

Observable angular_J(int i, double kappa) {
  check_index(i);
  return {"J" + idx(i), kappa, [i](const PhaseFrame& f) { return f.J(i); }};
}

Observable kappa_coordinate(int i, double kappa) {
  check_index(i);
  static constexpr const char* names[] = {"x", "y", "z"};
  return {names[i - 1], kappa, [i](const PhaseFrame& f) { return f.coord(i); }};
}

Observable kinetic_energy(double kappa) {
  return {"T", kappa, [](const PhaseFrame& f) { return f.kinetic(); }};
}

Observable angular_momentum_squared(double kappa) {
  return {"Jsq", kappa,
          [](const PhaseFrame& f) { return sqr(f.J(1)) + sqr(f.J(2)) + sqr(f.J(3)); }};
}

Observable noether_P_squared(double kappa) {
  return {"Psq", kappa,
          [](const PhaseFrame& f) { return sqr(f.P(1)) + sqr(f.P(2)) + sqr(f.P(3)); }};
}

Observable radial_momentum_sin(double kappa) {
  return {"prS", kappa, [](const PhaseFrame& f) { return f.p_r() * f.sin_r(); }};
}

// --- oscillator family ---------------------------------------------------------

Observable fradkin_K(int i, int j, const ObservableParams& p) {
  check_index(i);
  check_index(j);
  const double alpha = p.alpha;
  if (i == j) {
    const double ki = p.coupling(i);
    return {"K" + idx(i) + idx(i), p.kappa, [i, alpha, ki](const PhaseFrame& f) {
              const Jet& t = f.tan_r();
              Jet out = sqr(f.P(i)) + alpha * alpha * sqr(t) * sqr(f.direction(i));
              if (ki != 0.0) {
                const Jet td = t * f.direction(i);
                nonzero(td.v, "Tan_k(r) n_i");
                out += 2.0 * ki / sqr(td);
              }
              return out;
            }};
  }
  if (p.k1 != 0.0 || p.k2 != 0.0 || p.k3 != 0.0) {
    throw UnsupportedEntry("off-diagonal Fradkin entry K" + idx(i) + idx(j) +
                           " is only defined for the pure oscillator (k1 = k2 = k3 = 0)");
  }
  // K13 and K31 are the same function; the canonical name puts the larger
  // index first only for (3, 1) to match K12, K23, K31.
  std::string name = "K" + idx(i) + idx(j);
  if ((i == 1 && j == 3) || (i == 3 && j == 1)) name = "K31";
  if (i == 2 && j == 1) name = "K12";
  if (i == 3 && j == 2) name = "K23";
  return {name, p.kappa, [i, j, alpha](const PhaseFrame& f) {
            return f.P(i) * f.P(j) +
                   alpha * alpha * sqr(f.tan_r()) * f.direction(i) * f.direction(j);
          }};
}

ComplexObservable complex_M(int j, double kappa, double alpha) {
  check_index(j);
  Observable re("Re M" + idx(j), kappa, [j](const PhaseFrame& f) { return f.P(j); });
  Observable im("Im M" + idx(j), kappa,
                [j, alpha](const PhaseFrame& f) { return alpha * f.tan_r() * f.direction(j); });
  return {std::move(re), std::move(im)};
}

Observable oscillator_lambda(double kappa) {
  return {"lambda", kappa, [](const PhaseFrame& f) {
            nonzero(f.cos_r().v, "Cos_k(r)");
            return 1.0 / sqr(f.cos_r());
          }};
}

Observable sw_KJ(int i, const ObservableParams& p) {
  check_index(i);
  // K_Ji = J_i^2 + 2 (k_a c_b^2 / c_a^2 + k_b c_a^2 / c_b^2), (a, b) the other two axes.
  const int a = i == 1 ? 2 : 1;
  const int b = i == 3 ? 2 : 3;
  const double ka = p.coupling(a);
  const double kb = p.coupling(b);
  return {"KJ" + idx(i), p.kappa, [i, a, b, ka, kb](const PhaseFrame& f) {
            Jet out = sqr(f.J(i));
            if (ka != 0.0) out += 2.0 * ka * sqr(f.coord(b) / f.coord_nonzero(a));
            if (kb != 0.0) out += 2.0 * kb * sqr(f.coord(a) / f.coord_nonzero(b));
            return out;
          }};
}

namespace {

// 1 - kappa (Tan_k(r) cos t)^2, the denominator of A_z.
Jet az_denominator(const PhaseFrame& f) {
  const Jet d = 1.0 - f.kappa() * sqr(f.tan_r() * f.cos_theta());
  nonzero(d.v, "1 - kappa (Tan_k(r) cos theta)^2");
  return d;
}

Jet az(const PhaseFrame& f) { return f.tan_r() * f.cos_theta() / az_denominator(f); }

// 1 - kappa (x^2 + y^2)
Jet planar_denominator(const PhaseFrame& f) {
  const Jet d = 1.0 - f.kappa() * (sqr(f.coord(1)) + sqr(f.coord(2)));
  nonzero(d.v, "1 - kappa (x^2 + y^2)");
  return d;
}

}  // namespace

Osc112Observables osc112_observables(const ObservableParams& p) {
  const double kappa = p.kappa;
  const double a2 = p.alpha * p.alpha;
  const double k1 = p.k1;
  const double k2 = p.k2;

  Observable A_z("Az", kappa, [](const PhaseFrame& f) { return az(f); });

  Observable V_112("V112", kappa, [a2](const PhaseFrame& f) {
    const Jet rho2 = sqr(f.coord(1)) + sqr(f.coord(2));
    return 0.5 * a2 * (rho2 + 4.0 * sqr(az(f))) / planar_denominator(f);
  });

  Observable K_3("K3", kappa,
                 [a2](const PhaseFrame& f) { return sqr(f.P(3)) + 4.0 * a2 * sqr(az(f)); });

  ObservableParams kj = p;
  kj.k3 = 0.0;
  Observable K_J3 = sw_KJ(3, kj);

  Observable K_12("K12", kappa, [kappa, a2, k1, k2](const PhaseFrame& f) {
    const Jet x2 = sqr(f.coord(1));
    const Jet y2 = sqr(f.coord(2));
    Jet out = sqr(f.P(1)) + kappa * sqr(f.J(1)) + sqr(f.P(2)) + kappa * sqr(f.J(2));
    out += a2 * (1.0 + 4.0 * kappa * sqr(az(f))) * (x2 + y2) / planar_denominator(f);
    if (k2 != 0.0) out += 2.0 * k2 * (1.0 - kappa * x2) / sqr(f.coord_nonzero(2));
    if (k1 != 0.0) out += 2.0 * k1 * (1.0 - kappa * y2) / sqr(f.coord_nonzero(1));
    return out;
  });

  // tan(theta) A_z^2 is evaluated as sin t cos t Tan^2 / (1 - kappa (Tan cos t)^2)^2,
  // which is the same function without the removable 0 * inf at cos t = 0.
  auto tan_theta_az2 = [](const PhaseFrame& f) {
    return f.sin_theta() * f.cos_theta() * sqr(f.tan_r()) / sqr(az_denominator(f));
  };

  Observable K_RL1("KRL1", kappa, [a2, k1, tan_theta_az2](const PhaseFrame& f) {
    nonzero(f.cos_r().v, "Cos_k(r)");
    Jet out = -f.P(1) * f.J(2) + a2 * tan_theta_az2(f) * f.cos_phi() / f.cos_r() * f.coord(1);
    if (k1 != 0.0) out -= 2.0 * k1 * f.cos_r() * f.coord(3) / sqr(f.coord_nonzero(1));
    return out;
  });

  Observable K_RL2("KRL2", kappa, [a2, k2, tan_theta_az2](const PhaseFrame& f) {
    nonzero(f.cos_r().v, "Cos_k(r)");
    Jet out = f.P(2) * f.J(1) + a2 * tan_theta_az2(f) * f.sin_phi() / f.cos_r() * f.coord(2);
    if (k2 != 0.0) out -= 2.0 * k2 * f.cos_r() * f.coord(3) / sqr(f.coord_nonzero(2));
    return out;
  });

  return {std::move(A_z), std::move(V_112), std::move(K_3), std::move(K_J3),
          std::move(K_12), std::move(K_RL1), std::move(K_RL2)};
}

// --- Kepler family ---------------------------------------------------------------

namespace {

Jet runge_lenz(int i, double k, const PhaseFrame& f) {
  switch (i) {
    case 1:
      return f.P(2) * f.J(3) - f.P(3) * f.J(2) + k * f.direction(1);
    case 2:
      return f.P(3) * f.J(1) - f.P(1) * f.J(3) + k * f.direction(2);
    default:
      return f.P(1) * f.J(2) - f.P(2) * f.J(1) + k * f.direction(3);
  }
}

Jet nonlinear_sum(const ObservableParams& p, const PhaseFrame& f) {
  Jet sum(0.0);
  for (int j = 1; j <= 3; ++j) {
    const double kj = p.coupling(j);
    if (kj != 0.0) sum += kj / sqr(f.coord_nonzero(j));
  }
  return sum;
}

Jet r_function(int i, const ObservableParams& p, const PhaseFrame& f) {
  return runge_lenz(i, p.k, f) +
         2.0 * f.cos_r() * f.sin_r() * f.direction(i) * nonlinear_sum(p, f);
}

Jet ratio(int i, const PhaseFrame& f) { return f.p_r() * f.sin_r() / f.coord_nonzero(i); }

void require_nonnegative(int i, double ki) {
  if (ki < 0.0) {
    throw NegativeCoupling("k" + idx(i) + " = " + std::to_string(ki) +
                           " < 0: sqrt(2 k_i) is not real");
  }
}

}  // namespace

Observable kepler_RL(int i, double kappa, double k) {
  check_index(i);
  return {"KRL" + idx(i), kappa, [i, k](const PhaseFrame& f) { return runge_lenz(i, k, f); }};
}

Observable k123_R(int i, const ObservableParams& p) {
  check_index(i);
  return {"R" + idx(i), p.kappa, [i, p](const PhaseFrame& f) { return r_function(i, p, f); }};
}

Observable radial_ratio(int i, double kappa) {
  check_index(i);
  return {"Q" + idx(i), kappa, [i](const PhaseFrame& f) { return ratio(i, f); }};
}

Observable k123_lambda(int i, double kappa) {
  check_index(i);
  return {"lambda" + idx(i), kappa,
          [i](const PhaseFrame& f) { return 1.0 / sqr(f.coord_nonzero(i)); }};
}

ComplexObservable k123_N(int i, const ObservableParams& p) {
  check_index(i);
  const double ki = p.coupling(i);
  require_nonnegative(i, ki);
  const double w = std::sqrt(2.0 * ki);
  Observable re = k123_R(i, p).renamed("Re N" + idx(i));
  Observable im("Im N" + idx(i), p.kappa, [i, w](const PhaseFrame& f) {
    if (w == 0.0) return Jet(0.0);
    return w * ratio(i, f);
  });
  return {std::move(re), std::move(im)};
}

Observable k123_KR(int i, const ObservableParams& p) {
  check_index(i);
  const double ki = p.coupling(i);
  require_nonnegative(i, ki);
  return {"KR" + idx(i), p.kappa, [i, p, ki](const PhaseFrame& f) {
            Jet out = sqr(r_function(i, p, f));
            if (ki != 0.0) out += 2.0 * ki * sqr(ratio(i, f));
            return out;
          }};
}

}  // namespace curvedyn
