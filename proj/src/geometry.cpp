#include "curvedyn/geometry.hpp"

#include <cmath>
#include <numbers>

#include "curvedyn/detail/guard.hpp"
#include "curvedyn/errors.hpp"

namespace curvedyn {

using detail::nonzero;

PhaseVector to_vector(const PhaseState& s) {
  return {s.q.r, s.q.theta, s.q.phi, s.p_r, s.p_theta, s.p_phi};
}

PhaseState from_vector(const PhaseVector& v) {
  return PhaseState{{v[0], v[1], v[2]}, v[3], v[4], v[5]};
}

bool is_valid(double kappa, const ConfigPoint& q) {
  if (!std::isfinite(q.r) || !std::isfinite(q.theta) || !std::isfinite(q.phi)) return false;
  if (q.r <= 0.0) return false;
  if (kappa > 0.0 && q.r >= std::numbers::pi / std::sqrt(kappa)) return false;
  return q.theta > 0.0 && q.theta < std::numbers::pi;
}

bool is_valid(double kappa, const PhaseState& s) {
  return is_valid(kappa, s.q) && std::isfinite(s.p_r) && std::isfinite(s.p_theta) &&
         std::isfinite(s.p_phi);
}

MetricDiag metric_coeffs(double kappa, const ConfigPoint& q) {
  const double s = sin_k(kappa, q.r);
  const double st = std::sin(q.theta);
  return {1.0, s * s, s * s * st * st};
}

double volume_density(double kappa, const ConfigPoint& q) {
  const double s = sin_k(kappa, q.r);
  return s * s * std::sin(q.theta);
}

std::string_view to_string(KillingField f) {
  switch (f) {
    case KillingField::X1: return "X1";
    case KillingField::X2: return "X2";
    case KillingField::X3: return "X3";
    case KillingField::Y1: return "Y1";
    case KillingField::Y2: return "Y2";
    case KillingField::Y3: return "Y3";
  }
  return "?";
}

TangentVector killing_field(KillingField id, double kappa, const ConfigPoint& q) {
  const double st = std::sin(q.theta);
  const double ct = std::cos(q.theta);
  const double sp = std::sin(q.phi);
  const double cp = std::cos(q.phi);

  switch (id) {
    case KillingField::Y3:
      return {0.0, 0.0, 1.0};
    case KillingField::Y1:
      return {0.0, -sp, -cp * ct / nonzero(st, "sin(theta)")};
    case KillingField::Y2:
      return {0.0, cp, -sp * ct / nonzero(st, "sin(theta)")};
    default:
      break;
  }

  const double cot_r = cos_k(kappa, q.r) / nonzero(sin_k(kappa, q.r), "Sin_k(r)");
  switch (id) {
    case KillingField::X1:
      return {st * cp, cot_r * ct * cp, -cot_r * sp / nonzero(st, "sin(theta)")};
    case KillingField::X2:
      return {st * sp, cot_r * ct * sp, cot_r * cp / nonzero(st, "sin(theta)")};
    case KillingField::X3:
      nonzero(st, "sin(theta)");
      return {ct, -cot_r * st, 0.0};
    default:
      break;
  }
  return {};
}

namespace {

std::array<double, 3> as_array(const TangentVector& t) { return {t.a_r, t.a_theta, t.a_phi}; }

ConfigPoint shifted(const ConfigPoint& q, int axis, double delta) {
  ConfigPoint out = q;
  if (axis == 0) out.r += delta;
  if (axis == 1) out.theta += delta;
  if (axis == 2) out.phi += delta;
  return out;
}

void require_stencil(double kappa, const ConfigPoint& q, double h) {
  for (int axis = 0; axis < 3; ++axis) {
    if (!is_valid(kappa, shifted(q, axis, 2.0 * h)) ||
        !is_valid(kappa, shifted(q, axis, -2.0 * h))) {
      throw DomainSingularity("finite-difference stencil leaves the coordinate domain");
    }
  }
}

// Fourth-order central difference along one axis of a vector-valued function.
template <typename Fn>
std::array<double, 3> central_diff(Fn&& f, const ConfigPoint& q, int axis, double h) {
  const auto p1 = f(shifted(q, axis, h));
  const auto m1 = f(shifted(q, axis, -h));
  const auto p2 = f(shifted(q, axis, 2.0 * h));
  const auto m2 = f(shifted(q, axis, -2.0 * h));
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h);
  }
  return out;
}

// jac[i][j] = d_j V^i
Matrix3 field_jacobian(KillingField id, double kappa, const ConfigPoint& q, double h) {
  Matrix3 jac{};
  auto field = [&](const ConfigPoint& p) { return as_array(killing_field(id, kappa, p)); };
  for (int j = 0; j < 3; ++j) {
    const auto col = central_diff(field, q, j, h);
    for (int i = 0; i < 3; ++i) jac[i][j] = col[i];
  }
  return jac;
}

}  // namespace

TangentVector lie_bracket_numeric(KillingField a, KillingField b, double kappa,
                                  const ConfigPoint& q, double h) {
  require_stencil(kappa, q, h);
  const auto va = as_array(killing_field(a, kappa, q));
  const auto vb = as_array(killing_field(b, kappa, q));
  const Matrix3 ja = field_jacobian(a, kappa, q, h);
  const Matrix3 jb = field_jacobian(b, kappa, q, h);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out[i] += va[j] * jb[i][j] - vb[j] * ja[i][j];
  }
  return {out[0], out[1], out[2]};
}

Matrix3 lie_derivative_metric(KillingField id, double kappa, const ConfigPoint& q, double h) {
  require_stencil(kappa, q, h);
  const auto x = as_array(killing_field(id, kappa, q));
  const Matrix3 jac = field_jacobian(id, kappa, q, h);

  auto diag = [&](const ConfigPoint& p) {
    const MetricDiag m = metric_coeffs(kappa, p);
    return std::array<double, 3>{m.g_rr, m.g_thth, m.g_phph};
  };
  const auto g = diag(q);
  // dg[i][k] = d_k g_ii
  Matrix3 dg{};
  for (int k = 0; k < 3; ++k) {
    const auto col = central_diff(diag, q, k, h);
    for (int i = 0; i < 3; ++i) dg[i][k] = col[i];
  }

  Matrix3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double transport = 0.0;
      if (i == j) {
        for (int k = 0; k < 3; ++k) transport += x[k] * dg[i][k];
      }
      out[i][j] = transport + g[j] * jac[j][i] + g[i] * jac[i][j];
    }
  }
  return out;
}

double volume_divergence(KillingField id, double kappa, const ConfigPoint& q, double h) {
  require_stencil(kappa, q, h);
  auto flux = [&](const ConfigPoint& p) {
    auto v = as_array(killing_field(id, kappa, p));
    const double w = volume_density(kappa, p);
    for (auto& c : v) c *= w;
    return v;
  };
  double div = 0.0;
  for (int i = 0; i < 3; ++i) div += central_diff(flux, q, i, h)[i];
  return div / nonzero(volume_density(kappa, q), "volume density");
}

double geodesic_lagrangian(double kappa, const VelocityState& s) {
  const MetricDiag m = metric_coeffs(kappa, s.q);
  return 0.5 * (m.g_rr * s.v_r * s.v_r + m.g_thth * s.v_theta * s.v_theta +
                m.g_phph * s.v_phi * s.v_phi);
}

std::array<double, 3> geodesic_forces(double kappa, const VelocityState& s) {
  const double sr = sin_k(kappa, s.q.r);
  const double cr = cos_k(kappa, s.q.r);
  const double st = std::sin(s.q.theta);
  const double ct = std::cos(s.q.theta);
  const double inv_tan_r = cr / nonzero(sr, "Sin_k(r)");
  const double inv_tan_t = ct / nonzero(st, "sin(theta)");

  const double f_r = cr * sr * (s.v_theta * s.v_theta + st * st * s.v_phi * s.v_phi);
  const double f_theta = -2.0 * inv_tan_r * s.v_r * s.v_theta + ct * st * s.v_phi * s.v_phi;
  const double f_phi = -2.0 * (s.v_r * inv_tan_r + s.v_theta * inv_tan_t) * s.v_phi;
  return {f_r, f_theta, f_phi};
}

std::array<double, 6> noether_momenta_velocity(double kappa, const VelocityState& s) {
  const double sr = sin_k(kappa, s.q.r);
  const double cr = cos_k(kappa, s.q.r);
  const double st = std::sin(s.q.theta);
  const double ct = std::cos(s.q.theta);
  const double sp = std::sin(s.q.phi);
  const double cp = std::cos(s.q.phi);
  const double cs = cr * sr;
  const double s2 = sr * sr;

  return {
      st * cp * s.v_r + cs * (ct * cp * s.v_theta - st * sp * s.v_phi),
      st * sp * s.v_r + cs * (ct * sp * s.v_theta + st * cp * s.v_phi),
      ct * s.v_r - cs * st * s.v_theta,
      -s2 * (sp * s.v_theta + st * ct * cp * s.v_phi),
      s2 * (cp * s.v_theta - st * ct * sp * s.v_phi),
      s2 * st * st * s.v_phi,
  };
}

PhaseState legendre(double kappa, const VelocityState& s) {
  const MetricDiag m = metric_coeffs(kappa, s.q);
  return PhaseState{s.q, s.v_r, m.g_thth * s.v_theta, m.g_phph * s.v_phi};
}

VelocityState legendre_inv(double kappa, const PhaseState& s) {
  const double sr = nonzero(sin_k(kappa, s.q.r), "Sin_k(r)");
  const double st = nonzero(std::sin(s.q.theta), "sin(theta)");
  const double g_thth = sr * sr;
  const double g_phph = g_thth * st * st;
  return VelocityState{s.q, s.p_r, s.p_theta / g_thth, s.p_phi / g_phph};
}

ChartState to_rho_chart(double kappa, const PhaseState& s) {
  const double cr = nonzero(cos_k(kappa, s.q.r), "Cos_k(r)");
  return ChartState{RadialChart::rho, sin_k(kappa, s.q.r), s.q.theta, s.q.phi,
                    s.p_r / cr, s.p_theta, s.p_phi};
}

ChartState to_R_chart(double kappa, const PhaseState& s) {
  const double cr = cos_k(kappa, s.q.r);
  const double big_r = tan_k(kappa, s.q.r);
  return ChartState{RadialChart::tangent, big_r, s.q.theta, s.q.phi,
                    s.p_r * cr * cr, s.p_theta, s.p_phi};
}

PhaseState from_chart(double kappa, const ChartState& s) {
  double r = s.radial;
  double p_r = s.p_radial;
  switch (s.chart) {
    case RadialChart::geodesic:
      break;
    case RadialChart::rho: {
      r = asin_k(kappa, s.radial);
      p_r = s.p_radial * cos_k(kappa, r);
      break;
    }
    case RadialChart::tangent: {
      r = atan_k(kappa, s.radial);
      const double cr = cos_k(kappa, r);
      p_r = s.p_radial / (cr * cr);
      break;
    }
  }
  return PhaseState{{r, s.theta, s.phi}, p_r, s.p_theta, s.p_phi};
}

Jet chart_kinetic_jet(double kappa, const std::array<Jet, kPhaseDim>& z, RadialChart chart) {
  const Jet& x = z[0];
  const Jet st = sin(z[1]);
  nonzero(st.v, "sin(theta)");
  const Jet angular = sqr(z[4]) + sqr(z[5]) / sqr(st);
  switch (chart) {
    case RadialChart::geodesic: {
      const Jet sr = sin_k(kappa, x);
      nonzero(sr.v, "Sin_k(r)");
      return 0.5 * (sqr(z[3]) + angular / sqr(sr));
    }
    case RadialChart::rho: {
      nonzero(x.v, "rho");
      return 0.5 * ((1.0 - kappa * sqr(x)) * sqr(z[3]) + angular / sqr(x));
    }
    case RadialChart::tangent: {
      nonzero(x.v, "R");
      const Jet w = 1.0 + kappa * sqr(x);
      return 0.5 * (sqr(w) * sqr(z[3]) + w * angular / sqr(x));
    }
  }
  return Jet{};
}

double chart_kinetic(double kappa, const ChartState& s) {
  std::array<Jet, kPhaseDim> z{Jet(s.radial), Jet(s.theta), Jet(s.phi),
                               Jet(s.p_radial), Jet(s.p_theta), Jet(s.p_phi)};
  return chart_kinetic_jet(kappa, z, s.chart).v;
}

}  // namespace curvedyn
