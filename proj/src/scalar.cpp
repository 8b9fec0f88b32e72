#include "radshoot/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "radshoot/energy.hpp"
#include "radshoot/nodal.hpp"

namespace radshoot {

namespace {

IntegratorConfig unit_ball_config(IntegratorConfig cfg) {
  cfg.r_max = 1.0;
  return cfg;
}

double boundary_value_of(const IntegrationOutcome& outcome) {
  return outcome.dense.value(outcome.dense.r_back(), 0);
}

} // namespace

ScalarShot shoot_scalar(double lambda, double mu, double amplitude,
                        const IntegratorConfig& config) {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(amplitude))
    throw Error(Errc::invalid_argument, "shoot_scalar: non-finite input");
  const SystemParams params = SystemParams::scalar(lambda, mu);
  const IntegratorConfig cfg = unit_ball_config(config);
  const std::vector<double> a = {amplitude};
  ShootState start = origin_series_start(params, a, cfg.origin_h0);
  ScalarShot shot;
  shot.outcome = integrate(params, cfg, start);
  shot.boundary_value = boundary_value_of(shot.outcome);
  shot.node_count = shot.outcome.counted_nodes()[0];
  return shot;
}

SolutionRecord find_amplitude(double lambda, double mu, int nodes,
                              const ScalarSolveOptions& options) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw Error(Errc::invalid_argument,
                "find_amplitude: lambda and mu must be positive");
  if (nodes < 0)
    throw Error(Errc::invalid_argument, "find_amplitude: nodes must be >= 0");
  const SystemParams params = SystemParams::scalar(lambda, mu);
  const IntegratorConfig cfg = unit_ball_config(options.integrator);
  const double sign_p = (nodes % 2 == 0) ? 1.0 : -1.0;

  struct Probe {
    double u1;
    int k;
  };
  auto probe = [&](double a) -> Probe {
    ShootState start = origin_series_start(params, {&a, 1}, cfg.origin_h0);
    IntegrationOutcome out = integrate(params, cfg, start);
    if (out.reason != Termination::reached_end)
      throw Error(Errc::solver_failure,
                  "find_amplitude: trajectory left the ball regime");
    return {boundary_value_of(out), out.counted_nodes()[0]};
  };

  // expand the amplitude bracket until the node count passes `nodes`; the
  // low end first shrinks below the class when mu is large
  double lo = 1e-3, hi = 1.0;
  Probe plo = probe(lo);
  while (plo.k > nodes) {
    lo /= 4.0;
    if (lo < 1e-14)
      throw Error(Errc::solver_failure, "nodal class unreachable");
    plo = probe(lo);
  }
  Probe phi_probe = probe(hi);
  if (phi_probe.k < plo.k)
    throw Error(Errc::solver_failure, "uniqueness violation");
  int prev_k = plo.k;
  while (phi_probe.k <= nodes) {
    if (phi_probe.k < prev_k)
      throw Error(Errc::solver_failure, "uniqueness violation");
    prev_k = phi_probe.k;
    lo = hi;
    plo = phi_probe;
    hi *= 1.6;
    if (hi > options.amplitude_cap)
      throw Error(Errc::solver_failure, "nodal class unreachable");
    phi_probe = probe(hi);
  }

  // narrow to the adjacent classes k(lo) = nodes, k(hi) = nodes + 1
  for (int it = 0; it < 300 && !(plo.k == nodes && phi_probe.k == nodes + 1);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi)
      throw Error(Errc::solver_failure,
                  "find_amplitude: nodal classes collapsed");
    const Probe pm = probe(mid);
    if (pm.k <= nodes) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
      phi_probe = pm;
    }
  }

  // bisection on the boundary-value sign within the class
  auto psi = [&](const Probe& p) { return p.u1 * sign_p; };
  while (hi - lo > 1e-5 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const Probe pm = probe(mid);
    if (psi(pm) > 0.0)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish with the variational du(1)/da; bisection fallback keeps the
  // iterate inside the bracket
  double a = 0.5 * (lo + hi);
  const double target = std::min(1e-12, options.boundary_tol);
  SensitivityOutcome sens;
  double u1 = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_newton + 45; ++it) {
    sens = integrate_with_sensitivity(params, cfg, {&a, 1});
    u1 = boundary_value_of(sens.outcome);
    if (u1 * sign_p > 0.0)
      lo = a;
    else if (u1 != 0.0)
      hi = a;
    if (std::abs(u1) <= target) break;
    const double slope = sens.boundary_jacobian[0][0];
    double next = (slope != 0.0) ? a - u1 / slope : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (next == a) break;
    a = next;
  }
  if (std::abs(u1) > options.boundary_tol)
    throw Error(Errc::solver_failure, "find_amplitude: no convergence");

  SolutionRecord record;
  record.params = params;
  record.amplitudes = {a};
  record.profile = sens.outcome.profile;
  record.nodal_counts = sens.outcome.counted_nodes();
  record.boundary_residual = std::abs(u1);
  record.ode_residual = ode_defect_sup(
      params, cfg, origin_series_start(params, {&a, 1}, cfg.origin_h0));
  record.energy = energy(params, record.profile);
  if (record.nodal_counts[0] != nodes)
    throw Error(Errc::solver_failure,
                "find_amplitude: converged outside the nodal class");
  return record;
}

// --- transform chain ---

double transform_T(double lambda) {
  const double s = std::sqrt(lambda);
  return s * std::tanh(s);
}

double transform_t_of_r(double lambda, double r) {
  const double s = std::sqrt(lambda);
  return s * std::tanh(s * r);
}

double transform_r_of_t(double lambda, double t) {
  const double s = std::sqrt(lambda);
  return std::atanh(t / s) / s;
}

double companion_phi(double lambda, double r) {
  const double s = std::sqrt(lambda);
  return s * std::cosh(s * r) / r;
}

double companion_phi_prime(double lambda, double r) {
  const double s = std::sqrt(lambda);
  return lambda * std::sinh(s * r) / r - s * std::cosh(s * r) / (r * r);
}

TransformedProfile transform_profile(double lambda, double mu,
                                     const SampledProfile& profile,
                                     const TransformOptions& options) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw Error(Errc::invalid_argument, "transform: positive lambda, mu");
  profile.validate();
  if (options.t_points < 32)
    throw Error(Errc::invalid_argument, "transform: grid too small");

  const double a = profile.values[0][0]; // origin amplitude
  const double s = std::sqrt(lambda);
  const double s32 = lambda * s;          // lambda^{3/2}
  const double s52 = lambda * lambda * s; // lambda^{5/2}

  TransformedProfile tp;
  tp.lambda = lambda;
  tp.mu = mu;
  tp.T = transform_T(lambda);

  // re-shoot tightly from the origin amplitude, forcing the stepper to land
  // exactly on the radii of the uniform t-grid so the sampled states carry
  // no interpolation error (they get differenced below)
  IntegratorConfig cfg = unit_ball_config(options.integrator);
  cfg.rel_tol = std::min(cfg.rel_tol, 1e-12);
  cfg.abs_tol = std::min(cfg.abs_tol, 1e-14);
  const SystemParams params = SystemParams::scalar(lambda, mu);
  ShootState start = origin_series_start(params, {&a, 1}, cfg.origin_h0);

  const int m = options.t_points;
  const double dt = tp.T / (double)(m - 1);
  std::vector<double> r_grid((std::size_t)(m - 1));
  for (int i = 1; i < m; ++i) {
    const double t = (i == m - 1) ? tp.T : dt * (double)i;
    r_grid[(std::size_t)(i - 1)] =
        std::min(transform_r_of_t(lambda, t), 1.0);
  }
  auto rhs2 = [&](double r, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -(2.0 / r) * y[1] + lambda * y[0] - mu * y[0] * y[0] * y[0];
  };
  OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  std::vector<std::vector<double>> states;
  states.reserve(r_grid.size());
  std::vector<double> y0 = {start.u[0], start.du[0]};
  integrate_ode(rhs2, start.r, y0, 1.0, opts, {}, r_grid, &states);
  if (states.size() != r_grid.size())
    throw Error(Errc::internal, "transform: checkpoint mismatch");

  tp.t_grid.resize(m);
  tp.y.resize(m);
  tp.dydt.resize(m);
  tp.dydt_bracket.resize(m);
  tp.h.resize(m);
  std::vector<double> hy3(m); // h y^3 in the fused nonsingular form
  for (int i = 0; i < m; ++i) {
    const double t = (i == m - 1) ? tp.T : dt * (double)i;
    tp.t_grid[i] = t;
    if (i == 0) {
      tp.y[0] = 0.0;
      tp.dydt_bracket[0] = a / s32;
      tp.h[0] = std::numeric_limits<double>::infinity();
      hy3[0] = 0.0;
      continue;
    }
    const double r = r_grid[(std::size_t)(i - 1)];
    const double u = states[(std::size_t)(i - 1)][0];
    const double du = states[(std::size_t)(i - 1)][1];
    const double ch = std::cosh(s * r);
    const double sh = std::sinh(s * r);
    tp.y[i] = u * r / (s * ch);
    tp.dydt_bracket[i] = (r * du * ch - s * r * u * sh + u * ch) / s32;
    tp.h[i] = (mu / lambda) * std::pow(ch, 6) / (r * r);
    hy3[i] = mu * r * u * u * u * ch * ch * ch / s52;
  }

  // chain-rule derivative: fourth-order differences of y on the t-grid
  for (int i = 0; i < m; ++i) {
    if (i < 2 || i + 2 >= m) {
      tp.dydt[i] = tp.dydt_bracket[i];
      continue;
    }
    tp.dydt[i] = (tp.y[i - 2] - 8.0 * tp.y[i - 1] + 8.0 * tp.y[i + 1] -
                  tp.y[i + 2]) /
                 (12.0 * dt);
  }
  for (int i = 2; i + 2 < m; ++i)
    tp.dydt_cross_check = std::max(
        tp.dydt_cross_check, std::abs(tp.dydt[i] - tp.dydt_bracket[i]));

  // transform residual: y'' from differences of the analytic dy/dt
  for (int i = 2; i + 2 < m; ++i) {
    const double ddy =
        (tp.dydt_bracket[i - 2] - 8.0 * tp.dydt_bracket[i - 1] +
         8.0 * tp.dydt_bracket[i + 1] - tp.dydt_bracket[i + 2]) /
        (12.0 * dt);
    tp.sup_transform_residual =
        std::max(tp.sup_transform_residual, std::abs(ddy + hy3[i]));
  }

  // round trip against the input profile: u(r) = phi(r) y(t(r)) with y
  // interpolated cubically on the uniform t-grid
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.radii[i];
    const double t = transform_t_of_r(lambda, r);
    if (t < 2.0 * dt || r <= 0.0) continue;
    int base = (int)std::floor(t / dt) - 1;
    base = std::clamp(base, 0, m - 4);
    double y_t = 0.0;
    for (int k = 0; k < 4; ++k) {
      double w = 1.0;
      for (int l = 0; l < 4; ++l) {
        if (l == k) continue;
        w *= (t - tp.t_grid[base + l]) /
             (tp.t_grid[base + k] - tp.t_grid[base + l]);
      }
      y_t += w * tp.y[base + k];
    }
    const double u_rec = companion_phi(lambda, r) * y_t;
    tp.round_trip_error = std::max(tp.round_trip_error,
                                   std::abs(u_rec - profile.values[0][i]));
  }

  if (tp.sup_transform_residual > options.residual_threshold)
    throw Error(Errc::solver_failure, "transform inconsistent");
  return tp;
}

// --- non-degeneracy ---

NondegeneracyResult nondegeneracy_scalar(double lambda, double mu,
                                         const SolutionRecord& record,
                                         const NondegeneracyOptions& options) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw Error(Errc::invalid_argument, "nondegeneracy: positive lambda, mu");
  if (record.amplitudes.empty())
    throw Error(Errc::invalid_argument, "nondegeneracy: empty record");
  const double a = record.amplitudes[0];
  const double s = std::sqrt(lambda);

  IntegratorConfig cfg;
  cfg.rel_tol = std::min(options.integrator.rel_tol, 1e-12);
  cfg.abs_tol = std::min(options.integrator.abs_tol, 1e-14);
  cfg.r_max = 1.0;
  cfg.origin_h0 = options.integrator.origin_h0;

  NondegeneracyResult res;

  // radial route: co-integrate (u, u', v, v') with v(0)=1, v'(0)=0
  {
    const double h0 = cfg.origin_h0;
    const double c = (lambda * a - mu * a * a * a) / 6.0;
    const double cv = (lambda - 3.0 * mu * a * a) / 6.0;
    std::vector<double> y0 = {a + c * h0 * h0, 2.0 * c * h0,
                              1.0 + cv * h0 * h0, 2.0 * cv * h0};
    auto rhs4 = [&](double r, std::span<const double> y,
                    std::span<double> dy) {
      const double u = y[0], du = y[1], v = y[2], dv = y[3];
      dy[0] = du;
      dy[1] = -(2.0 / r) * du + lambda * u - mu * u * u * u;
      dy[2] = dv;
      dy[3] = -(2.0 / r) * dv + lambda * v - 3.0 * mu * u * u * v;
    };
    OdeOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    double v_sup = 1.0;
    auto track = [&](const DenseSegment& seg, std::span<const double>) {
      for (double theta : {0.25, 0.5, 0.75, 1.0})
        v_sup = std::max(
            v_sup, std::abs(seg.eval_component(seg.t0 + theta * seg.h, 2)));
      return true;
    };
    OdeResult r4 = integrate_ode(rhs4, h0, y0, 1.0, opts, track);
    res.v_end = r4.y_end[2];
    res.v_sup = v_sup;
  }

  // transformed route: z'' + 3 h(t) y(t)^2 z = 0 with z(0)=0, z'(0)=1,
  // where 3 h y^2 = 3 mu u^2 cosh^4(sqrt(lambda) r) / lambda^2
  {
    const SystemParams params = SystemParams::scalar(lambda, mu);
    ShootState start = origin_series_start(params, {&a, 1}, cfg.origin_h0);
    IntegrationOutcome shot = integrate(params, cfg, start);
    const RadialDense& U = shot.dense;
    const double T = transform_T(lambda);
    auto rhs2 = [&](double t, std::span<const double> y,
                    std::span<double> dy) {
      const double r = std::min(transform_r_of_t(lambda, std::min(t, T)),
                                U.r_back());
      const double u = U.value(r, 0);
      const double ch = std::cosh(s * r);
      const double q =
          3.0 * mu * u * u * ch * ch * ch * ch / (lambda * lambda);
      dy[0] = y[1];
      dy[1] = -q * y[0];
    };
    std::vector<double> z0 = {0.0, options.z_slope};
    OdeOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    double z_sup = 0.0;
    auto track = [&](const DenseSegment& seg, std::span<const double>) {
      for (double theta : {0.25, 0.5, 0.75, 1.0})
        z_sup = std::max(
            z_sup, std::abs(seg.eval_component(seg.t0 + theta * seg.h, 0)));
      return true;
    };
    OdeResult r2 = integrate_ode(rhs2, 0.0, z0, T, opts, track);
    res.z_end = r2.y_end[0];
    res.z_sup = z_sup;
  }

  const bool z_ok =
      std::abs(res.z_end) > options.threshold * std::max(1.0, res.z_sup);
  const bool v_ok = std::abs(res.v_end) > options.threshold * res.v_sup;
  if (z_ok != v_ok)
    throw Error(Errc::solver_failure, "nondegeneracy tests conflict");
  res.nondegenerate = z_ok;
  return res;
}

} // namespace radshoot
