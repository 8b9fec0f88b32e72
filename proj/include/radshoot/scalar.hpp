#ifndef RADSHOOT_SCALAR_HPP
#define RADSHOOT_SCALAR_HPP

#include "radshoot/ode.hpp"
#include "radshoot/profile.hpp"

namespace radshoot {

// --- shooting for the scalar problem -Lap u + lambda u = mu u^3 on B_1 ---

struct ScalarShot {
  double boundary_value = 0.0; // u(1)
  int node_count = 0;          // strict sign changes on (0,1)
  IntegrationOutcome outcome;
};

ScalarShot shoot_scalar(double lambda, double mu, double amplitude,
                        const IntegratorConfig& config = {});

struct ScalarSolveOptions {
  IntegratorConfig integrator;
  double boundary_tol = 1e-10;
  double amplitude_cap = 1e5;
  int max_newton = 12;
};

// Amplitude a > 0 whose trajectory hits u(1) = 0 with exactly `nodes` interior
// sign changes: geometric bracket expansion on the node count, bisection on
// the boundary-value sign within the nodal class, Newton polish with the
// variational du(1)/da.
SolutionRecord find_amplitude(double lambda, double mu, int nodes,
                              const ScalarSolveOptions& options = {});

// --- transform of a ball solution to a Dirichlet problem on [0, T] ---
//
// phi(r) = sqrt(lambda) cosh(sqrt(lambda) r)/r solves Lap phi = lambda phi and
// diverges at the origin, so y = u/phi vanishes at r=0. With
// t(r) = sqrt(lambda) tanh(sqrt(lambda) r) the first-order and linear terms
// drop out and y'' + h(t) y^3 = 0 with
// h = (mu/lambda) cosh^6(sqrt(lambda) r)/r^2.

double transform_T(double lambda); // t(1) = sqrt(lambda) tanh(sqrt(lambda))
double transform_t_of_r(double lambda, double r);
double transform_r_of_t(double lambda, double t);
double companion_phi(double lambda, double r);
double companion_phi_prime(double lambda, double r);

struct TransformedProfile {
  std::vector<double> t_grid; // uniform on [0, T]
  std::vector<double> y;
  std::vector<double> dydt;         // finite differences of y on the grid
  std::vector<double> dydt_bracket; // (r^2/lambda^2)(u' phi - u phi')
  std::vector<double> h;            // h(t); +inf at t = 0
  double T = 0.0;
  double lambda = 0.0, mu = 0.0;
  double sup_transform_residual = 0.0; // sup |y'' + h y^3|
  double round_trip_error = 0.0;       // sup |phi y(t(r)) - u(r)|
  double dydt_cross_check = 0.0;       // sup |dydt - dydt_bracket|
};

struct TransformOptions {
  int t_points = 80001;
  double residual_threshold = 1e-4;
  IntegratorConfig integrator;
};

// Requires a profile that solves the scalar equation; the trajectory is
// re-integrated from the profile's origin amplitude for dense evaluation.
TransformedProfile transform_profile(double lambda, double mu,
                                     const SampledProfile& profile,
                                     const TransformOptions& options = {});

// --- non-degeneracy of a scalar solution ---

struct NondegeneracyResult {
  double z_end = 0.0; // z(T), transformed linearization with z(0)=0, z'(0)=1
  double z_sup = 0.0;
  double v_end = 0.0; // v(1), radial linearization with v(0)=1, v'(0)=0
  double v_sup = 0.0;
  bool nondegenerate = false;
};

struct NondegeneracyOptions {
  double threshold = 1e-3; // relative size below which the test reads zero
  double z_slope = 1.0;    // initial z'(0); the flow is linear in it
  IntegratorConfig integrator;
};

// Runs both linearized flows independently; throws "nondegeneracy tests
// conflict" when they disagree about degeneracy.
NondegeneracyResult nondegeneracy_scalar(double lambda, double mu,
                                         const SolutionRecord& record,
                                         const NondegeneracyOptions& options = {});

} // namespace radshoot

#endif
