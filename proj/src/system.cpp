#include "radshoot/system.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "radshoot/energy.hpp"
#include "radshoot/parallel.hpp"

namespace radshoot {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& m) {
  const int n = (int)m.size();
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e(i, j) = m[(std::size_t)i][(std::size_t)j];
  return e;
}

std::vector<double> boundary_values(const IntegrationOutcome& outcome, int n) {
  std::vector<double> f(n);
  const double r_end = outcome.dense.r_back();
  for (int j = 0; j < n; ++j) f[(std::size_t)j] = outcome.dense.value(r_end, j);
  return f;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct NewtonSolve {
  SolutionRecord record;
  std::vector<std::vector<double>> boundary_jacobian;
};

// flips components with negative origin value; exact by the per-component
// odd symmetry of the system
void normalize_signs(SolutionRecord& record,
                     std::vector<std::vector<double>>& jacobian) {
  const int n = record.params.n;
  std::vector<double> flip((std::size_t)n, 1.0);
  bool any = false;
  for (int j = 0; j < n; ++j)
    if (record.amplitudes[(std::size_t)j] < 0.0) {
      flip[(std::size_t)j] = -1.0;
      any = true;
    }
  if (!any) return;
  for (int j = 0; j < n; ++j) {
    if (flip[(std::size_t)j] > 0.0) continue;
    record.amplitudes[(std::size_t)j] = -record.amplitudes[(std::size_t)j];
    for (auto& v : record.profile.values[(std::size_t)j]) v = -v;
    for (auto& v : record.profile.derivatives[(std::size_t)j]) v = -v;
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      jacobian[(std::size_t)i][(std::size_t)k] *=
          flip[(std::size_t)i] * flip[(std::size_t)k];
}

NewtonSolve newton_solve(const SystemParams& params,
                         std::span<const double> a0,
                         const NewtonOptions& options) {
  params.validate();
  if (params.geometry != Geometry::ball3d)
    throw Error(Errc::invalid_argument, "newton_refine requires ball3d");
  if ((int)a0.size() != params.n)
    throw Error(Errc::invalid_argument, "newton_refine: amplitude length");
  for (double v : a0)
    if (!std::isfinite(v))
      throw Error(Errc::invalid_argument, "newton_refine: non-finite start");

  IntegratorConfig cfg = options.integrator;
  cfg.r_max = 1.0;
  const int n = params.n;

  std::vector<double> a(a0.begin(), a0.end());
  SensitivityOutcome sens = integrate_with_sensitivity(params, cfg, a);
  std::vector<double> f = boundary_values(sens.outcome, n);
  double res = max_abs(f);

  int it = 0;
  while (res > options.tol) {
    if (++it > options.max_iterations)
      throw Error(Errc::solver_failure, "no convergence");

    const Eigen::MatrixXd J = to_eigen(sens.boundary_jacobian);
    {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      const double smin = svd.singularValues().minCoeff();
      const double smax = svd.singularValues().maxCoeff();
      if (!(smin > 0.0) || smax / smin > options.cond_limit)
        throw Error(Errc::solver_failure, "degenerate shooting point");
    }
    Eigen::VectorXd rhs(n);
    for (int j = 0; j < n; ++j) rhs(j) = -f[(std::size_t)j];
    const Eigen::VectorXd delta = J.partialPivLu().solve(rhs);

    // damped update: halve until the residual decreases
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> a_try((std::size_t)n);
    for (int half = 0; half < 30; ++half) {
      for (int j = 0; j < n; ++j)
        a_try[(std::size_t)j] = a[(std::size_t)j] + alpha * delta(j);
      ShootState start = origin_series_start(params, a_try, cfg.origin_h0);
      IntegrationOutcome probe = integrate(params, cfg, start);
      if (probe.reason == Termination::reached_end) {
        const double res_try = max_abs(boundary_values(probe, n));
        if (res_try < res) {
          a = a_try;
          res = res_try;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw Error(Errc::solver_failure, "no convergence");

    sens = integrate_with_sensitivity(params, cfg, a);
    f = boundary_values(sens.outcome, n);
    res = max_abs(f);
  }

  NewtonSolve out;
  out.record.params = params;
  out.record.amplitudes = a;
  out.record.profile = sens.outcome.profile;
  out.record.nodal_counts = sens.outcome.counted_nodes();
  out.record.boundary_residual = res;
  out.record.ode_residual = ode_defect_sup(
      params, cfg, origin_series_start(params, a, cfg.origin_h0));
  out.record.energy = energy(params, out.record.profile);
  out.boundary_jacobian = sens.boundary_jacobian;
  normalize_signs(out.record, out.boundary_jacobian);
  return out;
}

BoundaryMapResult boundary_map_from(const std::vector<std::vector<double>>& J) {
  BoundaryMapResult bm;
  bm.L = J;
  const Eigen::MatrixXd L = to_eigen(J);
  bm.det = L.determinant();
  double col_product = 1.0;
  for (int k = 0; k < L.cols(); ++k) col_product *= L.col(k).norm();
  bm.nondegenerate = std::abs(bm.det) > 1e-4 * col_product;
  return bm;
}

} // namespace

SolutionRecord newton_refine(const SystemParams& params,
                             std::span<const double> a0,
                             const NewtonOptions& options) {
  return newton_solve(params, a0, options).record;
}

BoundaryMapResult linearized_boundary_map(const SystemParams& params,
                                          const SolutionRecord& record,
                                          const IntegratorConfig& config) {
  params.validate();
  if (params.geometry != Geometry::ball3d)
    throw Error(Errc::invalid_argument, "boundary map requires ball3d");
  IntegratorConfig cfg = config;
  cfg.r_max = 1.0;
  SensitivityOutcome sens =
      integrate_with_sensitivity(params, cfg, record.amplitudes);
  return boundary_map_from(sens.boundary_jacobian);
}

ContinuationPath continue_in_beta(
    const SystemParams& params_at_zero,
    const std::vector<std::vector<double>>& beta_target,
    const NodalProfile& nodes, const StepPolicy& policy,
    const NewtonOptions& newton) {
  SystemParams base = params_at_zero;
  for (auto& row : base.beta) std::fill(row.begin(), row.end(), 0.0);
  base.validate();
  nodes.validate(base.n);
  {
    SystemParams check = base;
    check.beta = beta_target;
    check.validate(); // target must be symmetric with zero diagonal
  }

  auto params_at = [&](double s) {
    SystemParams p = base;
    for (int i = 0; i < p.n; ++i)
      for (int j = 0; j < p.n; ++j)
        p.beta[(std::size_t)i][(std::size_t)j] =
            s * beta_target[(std::size_t)i][(std::size_t)j];
    return p;
  };

  ContinuationPath path;

  // decoupled seed from the per-component scalar solves
  std::vector<double> a((std::size_t)base.n);
  for (int j = 0; j < base.n; ++j) {
    ScalarSolveOptions sopt;
    sopt.integrator = newton.integrator;
    SolutionRecord scalar_rec = find_amplitude(
        base.lambda[(std::size_t)j], base.mu[(std::size_t)j],
        nodes.counts[(std::size_t)j], sopt);
    a[(std::size_t)j] = scalar_rec.amplitudes[0];
  }

  double s = 0.0;
  double ds = policy.initial_fraction;
  NewtonSolve current = newton_solve(base, a, newton);
  if (current.record.nodal_counts != nodes.counts)
    throw Error(Errc::solver_failure,
                "continuation: decoupled seed misses the nodal profile");
  path.steps.push_back({0.0, base.beta, current.record,
                        boundary_map_from(current.boundary_jacobian)});
  path.step_log.push_back("s=0 seeded");

  bool target_is_zero = true;
  for (const auto& row : beta_target)
    for (double b : row)
      if (b != 0.0) target_is_zero = false;
  if (target_is_zero) {
    path.reached_target = true;
    path.reached_fraction = 1.0;
    return path;
  }

  while (s < 1.0) {
    const double s_next = std::min(1.0, s + ds);
    const SystemParams p = params_at(s_next);
    bool ok = false;
    std::string why;
    try {
      NewtonSolve trial = newton_solve(p, current.record.amplitudes, newton);
      if (trial.record.nodal_counts == nodes.counts) {
        current = std::move(trial);
        ok = true;
      } else {
        why = "nodal counts changed";
      }
    } catch (const Error& e) {
      why = e.what();
    }
    std::ostringstream log;
    if (ok) {
      s = s_next;
      path.steps.push_back({s, p.beta, current.record,
                            boundary_map_from(current.boundary_jacobian)});
      log << "s=" << s << " accepted (ds=" << ds << ")";
      ds = std::min({ds * policy.growth, policy.max_fraction, 1.0 - s});
      if (ds == 0.0) ds = policy.min_fraction;
    } else {
      log << "s=" << s_next << " failed: " << why << "; ds halved to "
          << ds / 2.0;
      ds *= 0.5;
      if (ds < policy.min_fraction) {
        path.step_log.push_back(log.str());
        path.stalled = true;
        path.message = "continuation stalled";
        path.reached_fraction = s;
        return path;
      }
    }
    path.step_log.push_back(log.str());
  }
  path.reached_target = true;
  path.reached_fraction = 1.0;
  return path;
}

std::vector<BumpRow> bump_l4_diagnostic(const SystemParams& params,
                                        const SolutionRecord& record,
                                        double zero_tol) {
  if (classify_triviality(record.profile, zero_tol) == Triviality::trivial)
    return {};
  const BumpDecomposition d = decompose_bumps(params, record.profile, zero_tol);
  std::vector<BumpRow> rows;
  for (int j = 0; j < (int)d.per_component.size(); ++j) {
    const auto& bumps = d.per_component[(std::size_t)j];
    for (int q = 0; q < (int)bumps.size(); ++q) {
      const Bump& b = bumps[(std::size_t)q];
      rows.push_back({j, q, b.sign, b.r_lo, b.r_hi, b.l4_norm, b.h1_quotient});
    }
  }
  return rows;
}

double halton_point(std::uint64_t index, int dimension) {
  static constexpr int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                   23, 29, 31, 37, 41, 43, 47, 53};
  const int base =
      primes[dimension % (int)(sizeof(primes) / sizeof(primes[0]))];
  double f = 1.0, x = 0.0;
  while (index > 0) {
    f /= (double)base;
    x += f * (double)(index % (std::uint64_t)base);
    index /= (std::uint64_t)base;
  }
  return x;
}

UniquenessReport uniqueness_sweep(const SystemParams& params,
                                  const NodalProfile& nodes,
                                  const UniquenessOptions& options) {
  params.validate();
  nodes.validate(params.n);
  if (options.launches < 1)
    throw Error(Errc::invalid_argument, "uniqueness: launches must be >= 1");

  double box_hi = options.box_hi;
  if (box_hi <= 0.0) {
    // twice the largest decoupled nodal amplitude involved
    double a_max = 0.0;
    for (int j = 0; j < params.n; ++j) {
      ScalarSolveOptions sopt;
      sopt.integrator = options.newton.integrator;
      SolutionRecord rec = find_amplitude(params.lambda[(std::size_t)j],
                                          params.mu[(std::size_t)j],
                                          nodes.counts[(std::size_t)j], sopt);
      a_max = std::max(a_max, rec.amplitudes[0]);
    }
    box_hi = 2.0 * a_max;
  }

  const std::uint64_t offset = 1 + options.seed % 1000003ULL;
  std::vector<std::optional<SolutionRecord>> slots(
      (std::size_t)options.launches);
  parallel_for(options.launches, options.jobs, [&](int i) {
    std::vector<double> a0((std::size_t)params.n);
    for (int j = 0; j < params.n; ++j)
      a0[(std::size_t)j] =
          box_hi * halton_point(offset + (std::uint64_t)i, j);
    try {
      SolutionRecord rec = newton_refine(params, a0, options.newton);
      if (classify_triviality(rec.profile) != Triviality::non_trivial) return;
      if (rec.nodal_counts != nodes.counts) return;
      for (double amp : rec.amplitudes)
        if (!(amp > 0.0)) return;
      slots[(std::size_t)i] = std::move(rec);
    } catch (const Error&) {
      // divergent launch: not a root in range
    }
  });

  std::vector<std::vector<double>> kept;
  for (const auto& s : slots)
    if (s) kept.push_back(s->amplitudes);
  std::sort(kept.begin(), kept.end());

  UniquenessReport report;
  report.target = nodes;
  report.launches = options.launches;
  report.seed = options.seed;
  report.box_hi = box_hi;
  report.kept = (int)kept.size();
  for (const auto& a : kept) {
    bool placed = false;
    for (auto& c : report.clusters) {
      double scale = 1.0;
      for (double v : c.amplitudes) scale = std::max(scale, std::abs(v));
      double dist = 0.0;
      for (int j = 0; j < params.n; ++j)
        dist = std::max(dist, std::abs(a[(std::size_t)j] -
                                       c.amplitudes[(std::size_t)j]));
      if (dist <= options.cluster_radius * scale) {
        ++c.count;
        placed = true;
        break;
      }
    }
    if (!placed) report.clusters.push_back({a, 1});
  }
  report.verdict = report.clusters.empty()
                       ? "none-found"
                       : (report.clusters.size() == 1 ? "unique" : "multiple");
  return report;
}

} // namespace radshoot
