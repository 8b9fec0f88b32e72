#include "radshoot/liouville.hpp"

#include <algorithm>
#include <cmath>

#include "radshoot/parallel.hpp"

namespace radshoot {

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::oscillates: return "oscillates";
  case Verdict::blows_up: return "blows_up";
  case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

TrajectoryClassification classify_entire(const SystemParams& params,
                                         std::span<const double> initial,
                                         const NodalProfile& targets,
                                         double r_max,
                                         const IntegratorConfig& config) {
  params.validate();
  targets.validate(params.n);
  if (params.geometry == Geometry::ball3d)
    throw Error(Errc::invalid_argument,
                "classification applies to the entire-space geometries");
  if ((int)initial.size() != params.n)
    throw Error(Errc::invalid_argument, "classify: initial data length");

  TrajectoryClassification tc;
  tc.initial.assign(initial.begin(), initial.end());
  tc.horizon = r_max;
  tc.node_counts.assign((std::size_t)params.n, 0);

  double scale = 0.0;
  for (double v : initial) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    tc.trivial = true;
    tc.verdict = Verdict::undecided;
    return tc;
  }

  IntegratorConfig cfg = config;
  cfg.r_max = r_max;

  ShootState start;
  switch (params.geometry) {
  case Geometry::entire3d:
    start = origin_series_start(params, initial, cfg.origin_h0);
    break;
  case Geometry::line:
    start = line_start(params, initial);
    break;
  case Geometry::halfline:
    start = halfline_start(params, initial);
    break;
  default:
    throw Error(Errc::internal, "unreachable geometry");
  }

  try {
    IntegrationOutcome out = integrate(params, cfg, start);
    tc.node_counts = out.counted_nodes();
    if (out.reason == Termination::blow_up ||
        out.reason == Termination::non_finite) {
      tc.verdict = Verdict::blows_up;
      tc.escape_radius = out.end_r;
      tc.horizon = out.end_r;
      return tc;
    }
  } catch (const Error&) {
    // a stalled step near a singularity is blow-up for classification
    tc.verdict = Verdict::blows_up;
    tc.escape_radius = r_max;
    return tc;
  }

  for (int j = 0; j < params.n; ++j)
    if (tc.node_counts[(std::size_t)j] > targets.counts[(std::size_t)j]) {
      tc.verdict = Verdict::oscillates;
      return tc;
    }
  tc.verdict = Verdict::undecided;
  return tc;
}

namespace {

// scaling symmetry of the lambda-free system: if U solves it then
// s U(s x) does too. Amplitudes scale by s; halfline slopes by s^2.
double normalization_factor(Geometry g, std::span<const double> initial) {
  double m = 0.0;
  for (double v : initial) m = std::max(m, std::abs(v));
  if (m == 0.0) return 1.0;
  if (g == Geometry::halfline) return 1.0 / std::sqrt(m);
  return 1.0 / m;
}

} // namespace

LiouvilleReport liouville_sweep(const std::vector<double>& mu,
                                const NodalProfile& targets,
                                const LiouvilleOptions& options) {
  const int n = (int)mu.size();
  if (n < 1) throw Error(Errc::invalid_argument, "sweep: empty mu");
  targets.validate(n);
  if (options.beta_grid.empty())
    throw Error(Errc::invalid_argument, "sweep: empty beta grid");
  if (options.points < 1 && !options.include_zero)
    throw Error(Errc::invalid_argument, "sweep: empty shooting grid");

  // deterministic log-spaced shooting vectors
  std::vector<std::vector<double>> shots;
  const std::uint64_t offset = 1 + options.seed % 1000003ULL;
  const double ratio = options.amp_max / options.amp_min;
  for (int i = 0; i < options.points; ++i) {
    std::vector<double> a((std::size_t)n);
    for (int j = 0; j < n; ++j)
      a[(std::size_t)j] =
          options.amp_min *
          std::pow(ratio, halton_point(offset + (std::uint64_t)i, j));
    shots.push_back(std::move(a));
  }
  if (options.include_zero)
    shots.push_back(std::vector<double>((std::size_t)n, 0.0));

  struct Task {
    double beta;
    Geometry geometry;
    std::vector<double> raw;
  };
  std::vector<Task> tasks;
  for (double beta : options.beta_grid)
    for (Geometry g : options.geometries)
      for (const auto& a : shots) tasks.push_back({beta, g, a});

  std::vector<LiouvilleRow> rows(tasks.size());
  parallel_for((int)tasks.size(), options.jobs, [&](int i) {
    const Task& task = tasks[(std::size_t)i];
    SystemParams params;
    params.n = n;
    params.mu = mu;
    params.lambda.assign((std::size_t)n, 1.0); // unused off the ball
    params.beta.assign((std::size_t)n, std::vector<double>((std::size_t)n, 0.0));
    params.geometry = task.geometry;
    params = params.with_uniform_beta(task.beta);

    const double sigma =
        options.normalize ? normalization_factor(task.geometry, task.raw)
                          : 1.0;
    std::vector<double> scaled = task.raw;
    const double amp_factor =
        task.geometry == Geometry::halfline ? sigma * sigma : sigma;
    for (auto& v : scaled) v *= amp_factor;

    TrajectoryClassification tc = classify_entire(
        params, scaled, targets, options.r_max, options.integrator);
    // report in the raw scale
    tc.initial = task.raw;
    tc.sigma = sigma;
    tc.escape_radius = tc.escape_radius * sigma;
    tc.horizon = tc.horizon * sigma;
    rows[(std::size_t)i] = {task.beta, task.geometry, std::move(tc)};
  });

  LiouvilleReport report;
  report.rows = std::move(rows);
  for (double beta : options.beta_grid)
    for (Geometry g : options.geometries) {
      LiouvilleCounts c;
      c.beta = beta;
      c.geometry = g;
      for (const auto& row : report.rows) {
        if (row.beta != beta || row.geometry != g) continue;
        ++c.total;
        switch (row.tc.verdict) {
        case Verdict::oscillates: ++c.oscillates; break;
        case Verdict::blows_up: ++c.blows_up; break;
        case Verdict::undecided:
          if (row.tc.trivial)
            ++c.undecided_trivial;
          else
            ++c.undecided_nontrivial;
          break;
        }
      }
      report.undecided_nontrivial_total += c.undecided_nontrivial;
      report.counts.push_back(c);
    }
  return report;
}

AprioriReport apriori_sweep(const SystemParams& base,
                            const std::vector<double>& beta_grid,
                            const NodalProfile& nodes,
                            const StepPolicy& policy,
                            const NewtonOptions& newton) {
  base.validate();
  if (base.geometry != Geometry::ball3d)
    throw Error(Errc::invalid_argument, "apriori sweep requires ball3d");
  nodes.validate(base.n);

  AprioriReport report;
  for (double beta : beta_grid) {
    const SystemParams target = base.with_uniform_beta(beta);
    AprioriRow row;
    row.beta = beta;
    ContinuationPath path =
        continue_in_beta(base, target.beta, nodes, policy, newton);
    if (path.reached_target) {
      const SolutionRecord& rec = path.steps.back().record;
      row.reached = true;
      row.sup_norm = rec.profile.sup_norm();
      row.boundary_residual = rec.boundary_residual;
      row.ode_residual = rec.ode_residual;
      row.energy = rec.energy;
      report.max_sup_norm = std::max(report.max_sup_norm, row.sup_norm);
    }
    report.rows.push_back(row);
  }
  return report;
}

} // namespace radshoot
