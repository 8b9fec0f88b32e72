#include "radshoot/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace radshoot {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw Error(Errc::invalid_argument, "integrator: tolerances must be > 0");
  if (!(r_max > 0.0))
    throw Error(Errc::invalid_argument, "integrator.r_max: must be > 0");
  if (!(origin_h0 > 0.0))
    throw Error(Errc::invalid_argument, "integrator.origin_h0: must be > 0");
  if (!(blowup_threshold > 0.0))
    throw Error(Errc::invalid_argument,
                "integrator.blowup_threshold: must be > 0");
  if (!(zero_tol > 0.0))
    throw Error(Errc::invalid_argument, "integrator.zero_tol: must be > 0");
  if (profile_points < 16)
    throw Error(Errc::invalid_argument,
                "integrator.profile_points: must be at least 16");
}

const char* termination_name(Termination t) {
  switch (t) {
  case Termination::reached_end: return "reached_end";
  case Termination::blow_up: return "blow_up";
  case Termination::non_finite: return "non_finite";
  }
  return "unknown";
}

namespace {

// u_j'' given the state; `three_d` adds the -(2/r) u_j' term and `with_lambda`
// the +lambda_j u_j term.
void acceleration(const SystemParams& params, double r,
                  std::span<const double> u, std::span<const double> du,
                  std::span<double> out) {
  const bool three_d = is_three_dimensional(params.geometry);
  const bool with_lambda = has_lambda_term(params.geometry);
  for (int j = 0; j < params.n; ++j) {
    double f = params.mu[j] * u[j] * u[j] * u[j];
    for (int i = 0; i < params.n; ++i) {
      if (i == j) continue;
      f += params.beta[j][i] * u[i] * u[i] * u[j];
    }
    double a = -f;
    if (with_lambda) a += params.lambda[j] * u[j];
    if (three_d) a -= (2.0 / r) * du[j];
    out[j] = a;
  }
}

// linearized acceleration: second-order part of the variational equations
void linearized_acceleration(const SystemParams& params, double r,
                             std::span<const double> u,
                             std::span<const double> phi,
                             std::span<const double> dphi,
                             std::span<double> out) {
  const bool three_d = is_three_dimensional(params.geometry);
  const bool with_lambda = has_lambda_term(params.geometry);
  for (int j = 0; j < params.n; ++j) {
    double a = -3.0 * params.mu[j] * u[j] * u[j] * phi[j];
    for (int i = 0; i < params.n; ++i) {
      if (i == j) continue;
      a -= params.beta[j][i] *
           (u[i] * u[i] * phi[j] + 2.0 * u[i] * u[j] * phi[i]);
    }
    if (with_lambda) a += params.lambda[j] * phi[j];
    if (three_d) a -= (2.0 / r) * dphi[j];
    out[j] = a;
  }
}

} // namespace

void rhs(const SystemParams& params, double r, std::span<const double> u,
         std::span<const double> du, std::span<double> du_out,
         std::span<double> ddu_out) {
  params.validate();
  if ((int)u.size() != params.n || (int)du.size() != params.n)
    throw Error(Errc::invalid_argument, "rhs: state size mismatch");
  if (r == 0.0 && is_three_dimensional(params.geometry))
    throw Error(Errc::invalid_argument, "origin requires series start");
  for (int j = 0; j < params.n; ++j) du_out[j] = du[j];
  acceleration(params, r, u, du, ddu_out);
}

std::vector<double> origin_series_coefficients(const SystemParams& params,
                                               std::span<const double> a) {
  std::vector<double> c(params.n);
  const bool with_lambda = has_lambda_term(params.geometry);
  for (int j = 0; j < params.n; ++j) {
    double f = params.mu[j] * a[j] * a[j] * a[j];
    for (int i = 0; i < params.n; ++i) {
      if (i == j) continue;
      f += params.beta[j][i] * a[i] * a[i] * a[j];
    }
    const double lam = with_lambda ? params.lambda[j] * a[j] : 0.0;
    c[j] = (lam - f) / 6.0;
  }
  return c;
}

ShootState origin_series_start(const SystemParams& params,
                               std::span<const double> amplitudes, double h0,
                               bool with_sensitivity) {
  params.validate();
  if (!(h0 > 0.0))
    throw Error(Errc::invalid_argument, "origin series: h0 must be positive");
  if (!is_three_dimensional(params.geometry))
    throw Error(Errc::invalid_argument,
                "origin series applies to the 3-d geometries only");
  if ((int)amplitudes.size() != params.n)
    throw Error(Errc::invalid_argument, "origin series: amplitude length");

  const auto c = origin_series_coefficients(params, amplitudes);
  ShootState s;
  s.r = h0;
  s.u.resize(params.n);
  s.du.resize(params.n);
  for (int j = 0; j < params.n; ++j) {
    s.u[j] = amplitudes[j] + c[j] * h0 * h0;
    s.du[j] = 2.0 * c[j] * h0;
  }
  if (with_sensitivity) {
    const bool with_lambda = has_lambda_term(params.geometry);
    s.sensitivity.assign(params.n, std::vector<double>(2 * params.n, 0.0));
    for (int k = 0; k < params.n; ++k) {
      for (int j = 0; j < params.n; ++j) {
        double dcj;
        if (j == k) {
          double d = -3.0 * params.mu[j] * amplitudes[j] * amplitudes[j];
          for (int i = 0; i < params.n; ++i)
            if (i != j) d -= params.beta[j][i] * amplitudes[i] * amplitudes[i];
          if (with_lambda) d += params.lambda[j];
          dcj = d / 6.0;
        } else {
          dcj = -2.0 * params.beta[j][k] * amplitudes[k] * amplitudes[j] / 6.0;
        }
        s.sensitivity[k][j] = (j == k ? 1.0 : 0.0) + dcj * h0 * h0;
        s.sensitivity[k][params.n + j] = 2.0 * dcj * h0;
      }
    }
  }
  return s;
}

ShootState line_start(const SystemParams& params,
                      std::span<const double> amplitudes) {
  params.validate();
  if (params.geometry != Geometry::line && params.geometry != Geometry::entire3d)
    throw Error(Errc::invalid_argument,
                "line start applies to symmetric geometries");
  ShootState s;
  s.r = 0.0;
  s.u.assign(amplitudes.begin(), amplitudes.end());
  s.du.assign(params.n, 0.0);
  return s;
}

ShootState halfline_start(const SystemParams& params,
                          std::span<const double> slopes) {
  params.validate();
  if (params.geometry != Geometry::halfline)
    throw Error(Errc::invalid_argument, "halfline start: wrong geometry");
  ShootState s;
  s.r = 0.0;
  s.u.assign(params.n, 0.0);
  s.du.assign(slopes.begin(), slopes.end());
  return s;
}

RadialDense::RadialDense(int n_components, double start_r, DenseSolution dense,
                         std::vector<double> series_a,
                         std::vector<double> series_c)
    : n_(n_components), start_r_(start_r), dense_(std::move(dense)),
      series_a_(std::move(series_a)), series_c_(std::move(series_c)) {}

double RadialDense::r_front() const {
  return series_a_.empty() ? start_r_ : 0.0;
}

double RadialDense::r_back() const { return dense_.t_back(); }

void RadialDense::eval(double r, std::span<double> u,
                       std::span<double> du) const {
  if (!series_a_.empty() && r < start_r_) {
    for (int j = 0; j < n_; ++j) {
      u[j] = series_a_[j] + series_c_[j] * r * r;
      du[j] = 2.0 * series_c_[j] * r;
    }
    return;
  }
  for (int j = 0; j < n_; ++j) {
    u[j] = dense_.eval_component(r, (std::size_t)j);
    du[j] = dense_.eval_component(r, (std::size_t)(n_ + j));
  }
}

double RadialDense::value(double r, int component) const {
  if (!series_a_.empty() && r < start_r_)
    return series_a_[component] + series_c_[component] * r * r;
  return dense_.eval_component(r, (std::size_t)component);
}

double RadialDense::derivative(double r, int component) const {
  if (!series_a_.empty() && r < start_r_)
    return 2.0 * series_c_[component] * r;
  return dense_.eval_component(r, (std::size_t)(n_ + component));
}

std::vector<int> IntegrationOutcome::counted_nodes() const {
  std::vector<int> counts(profile.components(), 0);
  for (const auto& e : events)
    if (e.counted) ++counts[e.component];
  return counts;
}

namespace {

struct SignTracker {
  int sign = 0;
  double r_definite = 0.0;
  bool in_dip = false;
  double dip_r = 0.0;
};

// Scans the dense trajectory for sign changes of the value components,
// locating each crossing by bisection on the continuous extension. A dip
// into the zero band that resurfaces with the same sign is logged as a
// grazing contact and not counted.
std::vector<ZeroCrossingEvent> scan_events(const DenseSolution& dense, int n,
                                           const ShootState& start,
                                           double zero_tol) {
  std::vector<ZeroCrossingEvent> events;
  std::vector<SignTracker> trackers(n);
  for (int j = 0; j < n; ++j) {
    if (std::abs(start.u[j]) > zero_tol) {
      trackers[j].sign = start.u[j] > 0.0 ? 1 : -1;
      trackers[j].r_definite = start.r;
    }
  }

  constexpr double thetas[4] = {0.25, 0.5, 0.75, 1.0};
  for (const auto& seg : dense.segments()) {
    for (double theta : thetas) {
      const double r = seg.t0 + theta * seg.h;
      for (int j = 0; j < n; ++j) {
        auto& tr = trackers[j];
        const double v = seg.eval_component(r, (std::size_t)j);
        if (std::abs(v) <= zero_tol) {
          if (tr.sign != 0 && !tr.in_dip) {
            tr.in_dip = true;
            tr.dip_r = r;
          }
          continue;
        }
        const int s = v > 0.0 ? 1 : -1;
        if (tr.sign == 0) {
          tr.sign = s;
          tr.r_definite = r;
          continue;
        }
        if (s != tr.sign) {
          const double root = bisect_root(
              [&](double x) {
                return dense.eval_component(x, (std::size_t)j);
              },
              tr.r_definite, r);
          events.push_back({j, root, true});
        } else if (tr.in_dip) {
          events.push_back({j, tr.dip_r, false});
        }
        tr.sign = s;
        tr.r_definite = r;
        tr.in_dip = false;
      }
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ZeroCrossingEvent& a, const ZeroCrossingEvent& b) {
                     return a.r < b.r;
                   });
  return events;
}

SampledProfile build_profile(const RadialDense& rd, int points) {
  SampledProfile p;
  const double lo = rd.r_front();
  const double hi = rd.r_back();
  std::vector<double> grid;
  grid.reserve((std::size_t)points + rd.dense().size() + 2);
  for (int i = 0; i < points; ++i)
    grid.push_back(lo + (hi - lo) * (double)i / (double)(points - 1));
  for (const auto& seg : rd.dense().segments()) grid.push_back(seg.t0);
  grid.push_back(hi);
  std::sort(grid.begin(), grid.end());
  const double gap = 1e-13 * std::max(1.0, hi - lo);
  std::vector<double> radii;
  for (double r : grid)
    if (radii.empty() || r - radii.back() > gap) radii.push_back(r);
  if (std::abs(radii.back() - hi) > gap) radii.push_back(hi);

  const int n = rd.components();
  p.radii = std::move(radii);
  p.values.assign(n, std::vector<double>(p.radii.size()));
  p.derivatives.assign(n, std::vector<double>(p.radii.size()));
  p.zero_crossings.resize(n);
  std::vector<double> u(n), du(n);
  for (std::size_t i = 0; i < p.radii.size(); ++i) {
    rd.eval(p.radii[i], u, du);
    for (int j = 0; j < n; ++j) {
      p.values[j][i] = u[j];
      p.derivatives[j][i] = du[j];
    }
  }
  return p;
}

} // namespace

IntegrationOutcome integrate(const SystemParams& params,
                             const IntegratorConfig& config,
                             const ShootState& start) {
  params.validate();
  config.validate();
  const int n = params.n;
  if ((int)start.u.size() != n || (int)start.du.size() != n)
    throw Error(Errc::invalid_argument, "integrate: state size mismatch");
  if (!(start.r < config.r_max))
    throw Error(Errc::invalid_argument, "integrate: start.r must precede r_max");

  const int n_dirs = start.has_sensitivity() ? (int)start.sensitivity.size() : 0;
  const std::size_t dim = (std::size_t)(2 * n + n_dirs * 2 * n);
  std::vector<double> y0(dim, 0.0);
  for (int j = 0; j < n; ++j) {
    y0[(std::size_t)j] = start.u[j];
    y0[(std::size_t)(n + j)] = start.du[j];
  }
  for (int k = 0; k < n_dirs; ++k)
    for (int j = 0; j < 2 * n; ++j)
      y0[(std::size_t)(2 * n + 2 * n * k + j)] = start.sensitivity[k][j];

  auto ode = [&params, n, n_dirs](double r, std::span<const double> y,
                                  std::span<double> dy) {
    const auto u = y.subspan(0, (std::size_t)n);
    const auto du = y.subspan((std::size_t)n, (std::size_t)n);
    for (int j = 0; j < n; ++j) dy[(std::size_t)j] = du[j];
    acceleration(params, r, u, du, dy.subspan((std::size_t)n, (std::size_t)n));
    for (int k = 0; k < n_dirs; ++k) {
      const std::size_t base = (std::size_t)(2 * n + 2 * n * k);
      const auto phi = y.subspan(base, (std::size_t)n);
      const auto dphi = y.subspan(base + (std::size_t)n, (std::size_t)n);
      for (int j = 0; j < n; ++j) dy[base + (std::size_t)j] = dphi[j];
      linearized_acceleration(params, r, u, phi, dphi,
                              dy.subspan(base + (std::size_t)n,
                                         (std::size_t)n));
    }
  };

  OdeOptions opts;
  opts.rel_tol = config.rel_tol;
  opts.abs_tol = config.abs_tol;
  opts.max_step = config.max_step;

  bool blown_up = false;
  auto watch = [&](const DenseSegment&, std::span<const double> y) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(y[(std::size_t)j])) return false;
      if (std::abs(y[(std::size_t)j]) > config.blowup_threshold) {
        blown_up = true;
        return false;
      }
    }
    return true;
  };

  OdeResult ode_result =
      integrate_ode(ode, start.r, y0, config.r_max, opts, watch);

  IntegrationOutcome out;
  const bool series_start = is_three_dimensional(params.geometry) &&
                            start.r <= config.origin_h0 * (1.0 + 1e-12) &&
                            start.r > 0.0;
  std::vector<double> series_a, series_c;
  if (series_start) {
    // recover the origin amplitudes from the series state
    series_c = std::vector<double>(n);
    series_a = std::vector<double>(n);
    for (int j = 0; j < n; ++j) {
      series_c[j] = start.du[j] / (2.0 * start.r);
      series_a[j] = start.u[j] - series_c[j] * start.r * start.r;
    }
  }
  out.dense = RadialDense(n, start.r, std::move(ode_result.dense), series_a,
                          series_c);
  out.events = scan_events(out.dense.dense(), n, start, config.zero_tol);
  out.profile = build_profile(out.dense, config.profile_points);
  for (const auto& e : out.events)
    if (e.counted) out.profile.zero_crossings[e.component].push_back(e.r);

  out.end_r = ode_result.t_end;
  if (ode_result.reached_end) {
    out.reason = Termination::reached_end;
  } else if (blown_up) {
    out.reason = Termination::blow_up;
    // escape radius: first point of the halting step past the threshold
    const auto& seg = out.dense.dense().segments().back();
    std::vector<double> u(n), du(n);
    auto excess = [&](double r) {
      out.dense.eval(r, u, du);
      double m = 0.0;
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(u[j]));
      return m - config.blowup_threshold;
    };
    if (excess(seg.t0) < 0.0 && excess(seg.t0 + seg.h) >= 0.0)
      out.end_r = bisect_root(excess, seg.t0, seg.t0 + seg.h);
    else
      out.end_r = seg.t0;
  } else {
    out.reason = Termination::non_finite;
  }
  return out;
}

SensitivityOutcome integrate_with_sensitivity(
    const SystemParams& params, const IntegratorConfig& config,
    std::span<const double> amplitudes) {
  if (params.geometry != Geometry::ball3d)
    throw Error(Errc::invalid_argument, "sensitivity run requires ball3d");
  ShootState start =
      origin_series_start(params, amplitudes, config.origin_h0, true);
  SensitivityOutcome res;
  res.outcome = integrate(params, config, start);
  const int n = params.n;
  res.boundary_jacobian.assign(n, std::vector<double>(n, 0.0));
  const double r_end = res.outcome.dense.r_back();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      res.boundary_jacobian[i][k] = res.outcome.dense.dense().eval_component(
          r_end, (std::size_t)(2 * n + 2 * n * k + i));
  return res;
}

double ode_defect_sup(const SystemParams& params,
                      const IntegratorConfig& config, const ShootState& start,
                      int n_points) {
  params.validate();
  config.validate();
  if (n_points < 16)
    throw Error(Errc::invalid_argument, "defect grid too small");
  const int n = params.n;
  const double lo = start.r;
  const double hi = config.r_max;
  if (!(hi > lo)) throw Error(Errc::invalid_argument, "defect: empty span");
  const double h = (hi - lo) / (double)(n_points - 1);

  std::vector<double> rg((std::size_t)n_points);
  for (int i = 0; i < n_points; ++i) rg[(std::size_t)i] = lo + h * (double)i;
  rg.back() = hi;

  std::vector<double> y0((std::size_t)(2 * n));
  for (int j = 0; j < n; ++j) {
    y0[(std::size_t)j] = start.u[(std::size_t)j];
    y0[(std::size_t)(n + j)] = start.du[(std::size_t)j];
  }
  auto ode = [&params, n](double r, std::span<const double> y,
                          std::span<double> dy) {
    const auto uu = y.subspan(0, (std::size_t)n);
    const auto dd = y.subspan((std::size_t)n, (std::size_t)n);
    for (int j = 0; j < n; ++j) dy[(std::size_t)j] = dd[j];
    acceleration(params, r, uu, dd, dy.subspan((std::size_t)n, (std::size_t)n));
  };
  OdeOptions opts;
  opts.rel_tol = config.rel_tol;
  opts.abs_tol = config.abs_tol;
  opts.max_step = config.max_step;
  std::vector<std::vector<double>> states;
  states.reserve((std::size_t)n_points);
  integrate_ode(ode, lo, y0, hi, opts, {}, rg, &states);
  if ((int)states.size() != n_points)
    throw Error(Errc::internal, "defect: checkpoint mismatch");

  std::vector<std::vector<double>> u(n), du(n);
  std::vector<double> ub(n), dub(n);
  for (int j = 0; j < n; ++j) {
    u[j].resize((std::size_t)n_points);
    du[j].resize((std::size_t)n_points);
  }
  for (int i = 0; i < n_points; ++i) {
    for (int j = 0; j < n; ++j) {
      u[j][(std::size_t)i] = states[(std::size_t)i][(std::size_t)j];
      du[j][(std::size_t)i] = states[(std::size_t)i][(std::size_t)(n + j)];
    }
  }

  // defect scaled by the acceleration magnitude: differencing a derivative of
  // size |u| omega cannot resolve below ~eps |u| omega^2 in double precision,
  // so only the relative defect is meaningful for large-amplitude trajectories
  std::vector<double> acc(n);
  double worst = 0.0;
  double scale = 1.0;
  for (int i = 2; i + 2 < n_points; ++i) {
    for (int j = 0; j < n; ++j) {
      ub[j] = u[j][(std::size_t)i];
      dub[j] = du[j][(std::size_t)i];
    }
    acceleration(params, rg[(std::size_t)i], ub, dub, acc);
    for (int j = 0; j < n; ++j) {
      const double ddu_fd =
          (du[j][(std::size_t)(i - 2)] - 8.0 * du[j][(std::size_t)(i - 1)] +
           8.0 * du[j][(std::size_t)(i + 1)] - du[j][(std::size_t)(i + 2)]) /
          (12.0 * h);
      worst = std::max(worst, std::abs(ddu_fd - acc[j]));
      scale = std::max(scale, std::abs(acc[j]));
    }
  }
  return worst / scale;
}

} // namespace radshoot
