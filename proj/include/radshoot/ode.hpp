#ifndef RADSHOOT_ODE_HPP
#define RADSHOOT_ODE_HPP

#include <optional>
#include <span>
#include <vector>

#include "radshoot/dopri5.hpp"
#include "radshoot/profile.hpp"
#include "radshoot/types.hpp"

namespace radshoot {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0; // 0 = no cap
  double blowup_threshold = 1e6;
  double r_max = 1.0;
  double origin_h0 = 1e-6;  // series start radius for 3-d geometries
  double zero_tol = 1e-9;   // dead band for sign-change detection
  int profile_points = 4097;

  void validate() const;
};

// State of the radial flow at one radius. sensitivity[k], when present, is
// the 2n-vector d(u,du)/da_k for the k-th shooting amplitude.
struct ShootState {
  double r = 0.0;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<std::vector<double>> sensitivity;

  bool has_sensitivity() const { return !sensitivity.empty(); }
};

// Equation right-hand side at radius r: fills du_out = u' and ddu_out = u''
// with u_j'' = -(2/r) u_j' [3-d] + lambda_j u_j [ball] - mu_j u_j^3
//             - sum_{i != j} beta_ij u_i^2 u_j.
// Throws for r == 0 in a 3-d geometry ("origin requires series start").
void rhs(const SystemParams& params, double r, std::span<const double> u,
         std::span<const double> du, std::span<double> du_out,
         std::span<double> ddu_out);

// Second-order series start u_j(h0) = a_j + c_j h0^2 with
// c_j = (lambda_j a_j - mu_j a_j^3 - sum beta_ij a_i^2 a_j) / 6, the lambda
// term dropped off the ball. Initializes the sensitivity blocks consistently
// when requested.
ShootState origin_series_start(const SystemParams& params,
                               std::span<const double> amplitudes, double h0,
                               bool with_sensitivity = false);

// Series coefficients c_j for the origin expansion (exposed for the profile
// builder and tests).
std::vector<double> origin_series_coefficients(const SystemParams& params,
                                               std::span<const double> a);

// Symmetry-point start for the 1-d geometries: u(0) = amplitudes, u'(0) = 0
// on the line; u(0) = 0, u'(0) = slopes on the half-line.
ShootState line_start(const SystemParams& params,
                      std::span<const double> amplitudes);
ShootState halfline_start(const SystemParams& params,
                          std::span<const double> slopes);

enum class Termination { reached_end, blow_up, non_finite };
const char* termination_name(Termination t);

struct ZeroCrossingEvent {
  int component = 0;
  double r = 0.0;
  bool counted = true; // false for grazing contacts logged without a crossing
};

// Evaluates (u, du) anywhere on the integrated span, using the origin series
// below the first integration radius.
class RadialDense {
public:
  RadialDense() = default;
  RadialDense(int n_components, double start_r, DenseSolution dense,
              std::vector<double> series_a = {},
              std::vector<double> series_c = {});

  int components() const { return n_; }
  double r_front() const; // 0 when an origin series is attached
  double r_back() const;

  void eval(double r, std::span<double> u, std::span<double> du) const;
  double value(double r, int component) const;
  double derivative(double r, int component) const;
  const DenseSolution& dense() const { return dense_; }

private:
  int n_ = 0;
  double start_r_ = 0.0;
  DenseSolution dense_;
  std::vector<double> series_a_, series_c_;
};

struct IntegrationOutcome {
  SampledProfile profile;
  std::vector<ZeroCrossingEvent> events;
  Termination reason = Termination::reached_end;
  double end_r = 0.0; // escape radius when the threshold stopped the run
  RadialDense dense;

  std::vector<int> counted_nodes() const; // strict crossings per component
};

// Adaptive integration of the radial system from `start` to config.r_max with
// dense output, per-component sign-change events and blow-up detection.
// Deterministic for fixed inputs.
IntegrationOutcome integrate(const SystemParams& params,
                             const IntegratorConfig& config,
                             const ShootState& start);

struct SensitivityOutcome {
  IntegrationOutcome outcome;
  // boundary_jacobian[i][k] = d u_i(r_max) / d a_k
  std::vector<std::vector<double>> boundary_jacobian;
};

// Propagates the variational equations along the trajectory for the n initial
// directions d/da_k and returns the boundary Jacobian. ball3d only.
SensitivityOutcome integrate_with_sensitivity(const SystemParams& params,
                                              const IntegratorConfig& config,
                                              std::span<const double> amplitudes);

// Strong-form equation defect on a uniform verification grid: the trajectory
// is re-integrated with the grid points as mandatory stops (exact states, no
// interpolation error) and u'' is estimated by fourth-order differences of
// u'. The result is scaled by max(1, sup |u''|) so the value stays
// meaningful for large amplitudes.
double ode_defect_sup(const SystemParams& params,
                      const IntegratorConfig& config, const ShootState& start,
                      int n_points = 8193);

} // namespace radshoot

#endif
