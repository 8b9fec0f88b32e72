#ifndef RADSHOOT_ENERGY_HPP
#define RADSHOOT_ENERGY_HPP

#include "radshoot/profile.hpp"
#include "radshoot/types.hpp"

namespace radshoot {

// Value of the action functional on the unit ball:
//   1/2 sum_j int |u_j'|^2 + lambda_j u_j^2
// - 1/4 sum_j int mu_j u_j^4 + sum_{i != j} beta_ij u_i^2 u_j^2,
// all integrals with the 4*pi*r^2 measure over [0,1].
double energy(const SystemParams& params, const SampledProfile& profile);

// Weak-form pairing of the equation defect with a radial test perturbation
// that vanishes at r=1:
//   sum_j int ( u_j' phi_j' + lambda_j u_j phi_j - f_j(U) phi_j ) dmu.
// For a critical point of the energy this is the directional derivative.
double weak_form_residual(const SystemParams& params,
                          const SampledProfile& state,
                          const SampledProfile& perturbation);

// Max over a fixed family of test perturbations sin(k pi r)/(k pi r) of the
// weak-form pairing, scaled by max(1, unsigned integrand mass). Measures how
// completely the weak form cancels on a converged solution.
double weak_residual_sup(const SystemParams& params,
                         const SampledProfile& state, int n_modes = 8);

} // namespace radshoot

#endif
