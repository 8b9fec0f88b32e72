#ifndef RADSHOOT_LIOUVILLE_HPP
#define RADSHOOT_LIOUVILLE_HPP

#include <cstdint>
#include <string>

#include "radshoot/ode.hpp"
#include "radshoot/system.hpp"

namespace radshoot {

enum class Verdict { oscillates, blows_up, undecided };
const char* verdict_name(Verdict v);

struct TrajectoryClassification {
  std::vector<double> initial; // amplitudes (slopes for halfline), raw scale
  double sigma = 1.0;          // normalization factor applied before the run
  Verdict verdict = Verdict::undecided;
  std::vector<int> node_counts; // at the horizon
  double escape_radius = 0.0;   // raw scale; set for blow-ups
  double horizon = 0.0;         // raw-equivalent radius actually covered
  bool trivial = false;         // all-zero initial data
};

// Integrates the entire-space trajectory literally (no normalization) up to
// r_max. oscillates: some component's node count exceeds its target;
// blows_up: threshold exceeded or the integrator stalled; undecided
// otherwise. Initial data are amplitudes at the symmetry point for
// entire3d/line and slopes at 0 for halfline.
TrajectoryClassification classify_entire(const SystemParams& params,
                                         std::span<const double> initial,
                                         const NodalProfile& targets,
                                         double r_max,
                                         const IntegratorConfig& config = {});

struct LiouvilleOptions {
  std::vector<double> beta_grid = {0.0};
  int points = 50; // nonzero shooting vectors per geometry
  double amp_min = 1e-2;
  double amp_max = 1e2;
  double r_max = 300.0;
  std::vector<Geometry> geometries = {Geometry::entire3d, Geometry::line,
                                      Geometry::halfline};
  bool normalize = true; // rescale each point to unit size before the run
  bool include_zero = false;
  std::uint64_t seed = 12345;
  int jobs = 1;
  IntegratorConfig integrator;
};

struct LiouvilleRow {
  double beta = 0.0;
  Geometry geometry = Geometry::entire3d;
  TrajectoryClassification tc;
};

struct LiouvilleCounts {
  double beta = 0.0;
  Geometry geometry = Geometry::entire3d;
  int oscillates = 0;
  int blows_up = 0;
  int undecided_nontrivial = 0;
  int undecided_trivial = 0;
  int total = 0;
};

struct LiouvilleReport {
  std::vector<LiouvilleRow> rows;
  std::vector<LiouvilleCounts> counts;
  int undecided_nontrivial_total = 0;
};

// Classifies a log-spaced low-discrepancy grid of shooting vectors for every
// (beta, geometry) pair. With `normalize` set, each point is rescaled by the
// exact scaling symmetry to unit size so the fixed horizon is scale-free; the
// report keeps raw initial data alongside the applied factor.
LiouvilleReport liouville_sweep(const std::vector<double>& mu,
                                const NodalProfile& targets,
                                const LiouvilleOptions& options = {});

struct AprioriRow {
  double beta = 0.0;
  bool reached = false;
  double sup_norm = 0.0;
  double boundary_residual = 0.0;
  double ode_residual = 0.0;
  double energy = 0.0;
};

struct AprioriReport {
  std::vector<AprioriRow> rows;
  double max_sup_norm = 0.0; // the empirical uniform bound
};

// Continues the ball problem from beta=0 to each grid value and records the
// solution sup-norms; a stalled continuation marks the row unreachable.
AprioriReport apriori_sweep(const SystemParams& base,
                            const std::vector<double>& beta_grid,
                            const NodalProfile& nodes,
                            const StepPolicy& policy = {},
                            const NewtonOptions& newton = {});

} // namespace radshoot

#endif
