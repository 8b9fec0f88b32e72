#ifndef RADSHOOT_SYSTEM_HPP
#define RADSHOOT_SYSTEM_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "radshoot/nodal.hpp"
#include "radshoot/ode.hpp"
#include "radshoot/profile.hpp"
#include "radshoot/scalar.hpp"

namespace radshoot {

struct NewtonOptions {
  IntegratorConfig integrator;
  double tol = 1e-10; // convergence: max_j |u_j(1)|
  int max_iterations = 50;
  double cond_limit = 1e12;
};

// Damped Newton on the shooting map F(a) = (u_1(1), ..., u_N(1)) with the
// variational boundary Jacobian. Signs are normalized to a_j > 0 afterwards
// via the per-component odd symmetry.
SolutionRecord newton_refine(const SystemParams& params,
                             std::span<const double> a0,
                             const NewtonOptions& options = {});

struct BoundaryMapResult {
  std::vector<std::vector<double>> L; // L[j][k] = phi_j(1) for phi(0) = e_k
  double det = 0.0;
  bool nondegenerate = false;
};

// Integrates the linearized system along the solution for the n coordinate
// directions; nondegenerate iff |det L| exceeds 1e-4 times the product of the
// column norms.
BoundaryMapResult linearized_boundary_map(const SystemParams& params,
                                          const SolutionRecord& record,
                                          const IntegratorConfig& config = {});

struct StepPolicy {
  double initial_fraction = 0.1;
  double min_fraction = 1e-6;
  double growth = 2.0;
  double max_fraction = 0.25;
};

struct ContinuationStep {
  double s = 0.0; // position along the path, 0..1
  std::vector<std::vector<double>> beta;
  SolutionRecord record;
  BoundaryMapResult boundary_map;
};

struct ContinuationPath {
  std::vector<ContinuationStep> steps;
  std::vector<std::string> step_log;
  bool reached_target = false;
  bool stalled = false;
  std::string message;
  double reached_fraction = 0.0;
};

// Walks beta linearly from 0 to `beta_target`, Newton-refining at each step
// from the previous amplitudes; the step is halved on Newton failure or a
// nodal-count change. A stall (step below min_fraction) is reported on the
// path, keeping the last good record.
ContinuationPath continue_in_beta(const SystemParams& params_at_zero,
                                  const std::vector<std::vector<double>>& beta_target,
                                  const NodalProfile& nodes,
                                  const StepPolicy& policy = {},
                                  const NewtonOptions& newton = {});

struct BumpRow {
  int component = 0;
  int index = 0;
  int sign = 0;
  double r_lo = 0.0, r_hi = 0.0;
  double l4_norm = 0.0;
  double h1_quotient = 0.0;
};

// Per-bump L4 norms and H1 quotients of a converged record; empty for a
// trivial record.
std::vector<BumpRow> bump_l4_diagnostic(const SystemParams& params,
                                        const SolutionRecord& record,
                                        double zero_tol = kDefaultZeroTol);

struct UniquenessOptions {
  int launches = 100;
  double box_hi = 0.0; // 0 = twice the largest scalar nodal amplitude
  double cluster_radius = 1e-6;
  std::uint64_t seed = 12345;
  int jobs = 1;
  NewtonOptions newton;
};

struct AmplitudeCluster {
  std::vector<double> amplitudes; // representative
  int count = 0;
};

struct UniquenessReport {
  NodalProfile target;
  int launches = 0;
  std::uint64_t seed = 0;
  double box_hi = 0.0;
  int kept = 0; // converged, non-trivial, matching records
  std::vector<AmplitudeCluster> clusters;
  std::string verdict; // "unique" | "multiple" | "none-found"
};

// Multistart Newton from low-discrepancy amplitude vectors in (0, box_hi]^N;
// records matching the nodal profile are clustered by relative amplitude
// distance.
UniquenessReport uniqueness_sweep(const SystemParams& params,
                                  const NodalProfile& nodes,
                                  const UniquenessOptions& options = {});

// Radical-inverse (Halton) point, dimensions indexed from 0.
double halton_point(std::uint64_t index, int dimension);

} // namespace radshoot

#endif
