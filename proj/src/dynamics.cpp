#include "curvedyn/dynamics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "curvedyn/errors.hpp"

namespace curvedyn {

double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& s) {
  const Gradient a = f.gradient(s);
  const Gradient b = g.gradient(s);
  double out = 0.0;
  for (int i = 0; i < 3; ++i) out += a[i] * b[i + 3] - a[i + 3] * b[i];
  return out;
}

Gradient fd_gradient(const Observable& f, const PhaseState& s, double h) {
  const PhaseVector v = to_vector(s);
  Gradient g{};
  for (std::size_t i = 0; i < kPhaseDim; ++i) {
    PhaseVector up = v;
    PhaseVector dn = v;
    up[i] += h;
    dn[i] -= h;
    g[i] = (f(from_vector(up)) - f(from_vector(dn))) / (2.0 * h);
  }
  return g;
}

double poisson_bracket_fd(const Observable& f, const Observable& g, const PhaseState& s,
                          double h) {
  const Gradient a = fd_gradient(f, s, h);
  const Gradient b = fd_gradient(g, s, h);
  double out = 0.0;
  for (int i = 0; i < 3; ++i) out += a[i] * b[i + 3] - a[i + 3] * b[i];
  return out;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::rk4_fixed:
      return "rk4_fixed";
    case Method::rk45_adaptive:
      return "rk45_adaptive";
    case Method::implicit_midpoint:
      return "implicit_midpoint";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::rk4_fixed, Method::rk45_adaptive, Method::implicit_midpoint}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown integration method '" + std::string(name) +
                    "' (expected rk4_fixed, rk45_adaptive or implicit_midpoint)");
}

namespace {

using Vec = PhaseVector;

Vec axpy(const Vec& y, double h, const Vec& k) {
  Vec out;
  for (std::size_t i = 0; i < kPhaseDim; ++i) out[i] = y[i] + h * k[i];
  return out;
}

Vec combine(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < kPhaseDim; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

Vec rk4_step(const OdeRhs& f, const Vec& y, double h) {
  const Vec k1 = f(y);
  const Vec k2 = f(axpy(y, h / 2, k1));
  const Vec k3 = f(axpy(y, h / 2, k2));
  const Vec k4 = f(axpy(y, h, k3));
  Vec out;
  for (std::size_t i = 0; i < kPhaseDim; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

Vec midpoint_step(const OdeRhs& f, const Vec& y, double h, const IntegratorOptions& opts,
                  int& iterations) {
  Vec y1 = axpy(y, h, f(y));
  for (int it = 1; it <= opts.implicit_max_iter; ++it) {
    Vec mid;
    for (std::size_t i = 0; i < kPhaseDim; ++i) mid[i] = 0.5 * (y[i] + y1[i]);
    const Vec next = axpy(y, h, f(mid));
    double delta = 0.0;
    for (std::size_t i = 0; i < kPhaseDim; ++i) {
      delta = std::max(delta, std::abs(next[i] - y1[i]) / (1.0 + std::abs(next[i])));
    }
    y1 = next;
    if (delta <= opts.implicit_tol) {
      iterations = it;
      return y1;
    }
  }
  throw NonConvergence("implicit midpoint stage did not converge in " +
                       std::to_string(opts.implicit_max_iter) + " iterations (dt = " +
                       std::to_string(h) + ")");
}

// Dormand-Prince 5(4).
struct DopriResult {
  Vec y;
  Vec k7;
  double err;       // max |e_i| / (1 + max(|y_i|, |y_new_i|))
};

DopriResult dopri_step(const OdeRhs& f, const Vec& y, const Vec& k1, double h) {
  const Vec k2 = f(combine(y, h, {{1.0 / 5, &k1}}));
  const Vec k3 = f(combine(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const Vec k4 = f(combine(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const Vec k5 = f(combine(y, h,
                           {{19372.0 / 6561, &k1},
                            {-25360.0 / 2187, &k2},
                            {64448.0 / 6561, &k3},
                            {-212.0 / 729, &k4}}));
  const Vec k6 = f(combine(y, h,
                           {{9017.0 / 3168, &k1},
                            {-355.0 / 33, &k2},
                            {46732.0 / 5247, &k3},
                            {49.0 / 176, &k4},
                            {-5103.0 / 18656, &k5}}));
  const Vec y5 = combine(y, h,
                         {{35.0 / 384, &k1},
                          {500.0 / 1113, &k3},
                          {125.0 / 192, &k4},
                          {-2187.0 / 6784, &k5},
                          {11.0 / 84, &k6}});
  const Vec k7 = f(y5);
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  double err = 0.0;
  for (std::size_t i = 0; i < kPhaseDim; ++i) {
    const double e =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    err = std::max(err, std::abs(e) / (1.0 + std::max(std::abs(y[i]), std::abs(y5[i]))));
  }
  return {y5, k7, err};
}

double initial_step(const OdeRhs& f, const Vec& y0, const Vec& f0, double tol) {
  auto rms = [&](const Vec& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < kPhaseDim; ++i) {
      const double w = v[i] / (tol + tol * std::abs(y0[i]));
      s += w * w;
    }
    return std::sqrt(s / kPhaseDim);
  };
  const double d0 = rms(y0);
  const double d1 = rms(f0);
  const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  Vec diff;
  try {
    const Vec f1 = f(axpy(y0, h0, f0));
    for (std::size_t i = 0; i < kPhaseDim; ++i) diff[i] = f1[i] - f0[i];
  } catch (const DomainSingularity&) {
    return h0 * 1e-3;
  }
  const double d2 = rms(diff) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min(100.0 * h0, h1);
}

}  // namespace

OdeSolution integrate_ode(const OdeRhs& f, const PhaseVector& y0, double t_end,
                          const IntegratorOptions& opts, const StepCheck& check,
                          const StepObserver& observer) {
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  const bool adaptive = opts.method == Method::rk45_adaptive;
  if (adaptive && !(opts.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!adaptive && !(opts.dt > 0.0)) throw ConfigError("time step must be positive");

  OdeSolution sol;
  sol.times.push_back(0.0);
  sol.states.push_back(y0);

  double t = 0.0;
  Vec y = y0;
  std::optional<Vec> k1;
  double dt = opts.dt;
  if (adaptive) {
    try {
      k1 = f(y0);
      dt = initial_step(f, y0, *k1, opts.tol);
    } catch (const DomainSingularity& e) {
      sol.truncated = true;
      sol.truncation_reason = e.what();
      return sol;
    }
  }
  dt = std::min(dt, opts.dt_max);
  double err_prev = 1e-4;
  int rejections = 0;
  bool last_rejected = false;

  for (long step = 0; t < t_end; ++step) {
    if (step >= opts.max_steps) {
      sol.truncated = true;
      sol.truncation_reason = "maximum number of steps reached";
      break;
    }
    const double remaining = t_end - t;
    const bool last = remaining <= dt * (1.0 + 1e-9);
    const double h = last ? remaining : dt;

    std::optional<std::string> reason;
    Vec y_new{};
    StepDiagnostics diag;
    diag.dt = h;
    double err = 0.0;
    Vec k7{};
    try {
      switch (opts.method) {
        case Method::rk4_fixed:
          y_new = rk4_step(f, y, h);
          break;
        case Method::implicit_midpoint:
          y_new = midpoint_step(f, y, h, opts, diag.iterations);
          break;
        case Method::rk45_adaptive: {
          if (!k1) k1 = f(y);
          DopriResult r = dopri_step(f, y, *k1, h);
          y_new = r.y;
          k7 = r.k7;
          err = r.err / opts.tol;
          diag.error_estimate = r.err;
          break;
        }
      }
      for (double v : y_new) {
        if (!std::isfinite(v)) reason = "non-finite state";
      }
      if (!reason && check) reason = check(y, y_new);
    } catch (const DomainSingularity& e) {
      reason = e.what();
    }

    if (reason) {
      ++rejections;
      last_rejected = true;
      dt = h / 2.0;
      if (dt < opts.dt_min) {
        sol.truncated = true;
        sol.truncation_reason = *reason;
        break;
      }
      continue;
    }
    if (adaptive && err > 1.0) {
      ++rejections;
      last_rejected = true;
      dt = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (dt < opts.dt_min) {
        sol.truncated = true;
        sol.truncation_reason = "step size fell below dt_min";
        break;
      }
      continue;
    }

    t = last ? t_end : t + h;
    y = y_new;
    diag.rejections = rejections;
    rejections = 0;
    sol.times.push_back(t);
    sol.states.push_back(y);
    sol.diagnostics.push_back(diag);

    if (adaptive) {
      k1 = k7;
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_prev = e;
      // A shortened final step says nothing about the next step size.
      if (!last) dt = std::min(h * fac, opts.dt_max);
    } else {
      dt = opts.dt;
    }
    last_rejected = false;
    if (observer && !observer(t, y)) break;
  }
  return sol;
}

std::optional<std::string> step_violation(const SystemSpec& spec, const PhaseVector& from,
                                          const PhaseVector& to) {
  const double kappa = spec.kappa();
  const PhaseState b = from_vector(to);
  if (!is_valid(kappa, b)) return "state left the coordinate domain";

  auto coords = [kappa](const PhaseVector& v) {
    const double S = sin_k(kappa, v[0]);
    return std::array<double, 3>{S * std::sin(v[1]) * std::cos(v[2]),
                                 S * std::sin(v[1]) * std::sin(v[2]), S * std::cos(v[1])};
  };
  const auto ca = coords(from);
  const auto cb = coords(to);
  const SystemParams& p = spec.params();
  const double ks[3] = {p.k1, p.k2, p.k3};
  for (int i = 0; i < 3; ++i) {
    if (ks[i] != 0.0 && (ca[i] > 0.0) != (cb[i] > 0.0)) {
      return "crossed the coordinate plane " + std::string(1, "xyz"[i]) + " = 0";
    }
  }
  const bool barrier = spec.id() == SystemId::oscillator || spec.id() == SystemId::sw ||
                       spec.id() == SystemId::osc112;
  if (barrier && (cos_k(kappa, from[0]) > 0.0) != (cos_k(kappa, to[0]) > 0.0)) {
    return "crossed the Cos_k(r) = 0 barrier";
  }
  if (spec.id() == SystemId::osc112) {
    auto dens = [kappa](const PhaseVector& v, const std::array<double, 3>& c) {
      const double tc = tan_k(kappa, v[0]) * std::cos(v[1]);
      return std::array<double, 2>{1.0 - kappa * (c[0] * c[0] + c[1] * c[1]),
                                   1.0 - kappa * tc * tc};
    };
    try {
      const auto da = dens(from, ca);
      const auto db = dens(to, cb);
      for (int i = 0; i < 2; ++i) {
        if ((da[i] > 0.0) != (db[i] > 0.0)) return "crossed a singular set of V_112";
      }
    } catch (const DomainSingularity& e) {
      return std::string(e.what());
    }
  }
  return std::nullopt;
}

Trajectory integrate(const SystemSpec& spec, const PhaseState& s0, double t_end,
                     const IntegratorOptions& opts, const StepObserver& observer) {
  const OdeRhs rhs = [&spec](const PhaseVector& v) { return hamilton_rhs(spec, from_vector(v)); };
  const StepCheck check = [&spec](const PhaseVector& a, const PhaseVector& b) {
    return step_violation(spec, a, b);
  };
  OdeSolution sol = integrate_ode(rhs, to_vector(s0), t_end, opts, check, observer);
  Trajectory traj;
  traj.times = std::move(sol.times);
  traj.diagnostics = std::move(sol.diagnostics);
  traj.truncated = sol.truncated;
  traj.truncation_reason = std::move(sol.truncation_reason);
  traj.states.reserve(sol.states.size());
  for (const auto& v : sol.states) traj.states.push_back(from_vector(v));
  return traj;
}

ConservationReport conservation_report(const Trajectory& traj,
                                       const std::vector<Observable>& observables) {
  ConservationReport report;
  for (const auto& obs : observables) {
    ConservationRow row;
    row.name = obs.name();
    if (!traj.states.empty()) {
      row.initial = obs(traj.states.front());
      for (const auto& s : traj.states) {
        row.max_abs_drift = std::max(row.max_abs_drift, std::abs(obs(s) - row.initial));
      }
      row.max_rel_drift = row.max_abs_drift / std::max(std::abs(row.initial), 1.0);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

RankResult independence_rank(const std::vector<Observable>& observables, const PhaseState& s,
                             double threshold) {
  RankResult out;
  if (observables.empty()) return out;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(observables.size()), kPhaseDim);
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const Gradient g = observables[i].gradient(s);
    double norm = 0.0;
    for (double v : g) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < kPhaseDim; ++j) {
      m(static_cast<Eigen::Index>(i), j) = norm > 0.0 ? g[j] / norm : 0.0;
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  for (double v : out.singular_values) {
    if (largest > 0.0 && v > threshold * largest) ++out.rank;
  }
  return out;
}

}  // namespace curvedyn
