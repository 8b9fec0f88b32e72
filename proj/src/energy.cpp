#include "radshoot/energy.hpp"

#include <cmath>
#include <numbers>

#include "radshoot/quadrature.hpp"

namespace radshoot {

namespace {

void require_unit_ball(const SystemParams& params,
                       const SampledProfile& profile) {
  params.validate();
  profile.validate();
  if (params.geometry != Geometry::ball3d)
    throw Error(Errc::invalid_argument, "energy requires ball3d geometry");
  if (profile.components() != params.n)
    throw Error(Errc::invalid_argument, "energy: component count mismatch");
  if (profile.r_back() < 1.0 - 1e-9)
    throw Error(Errc::invalid_argument, "incomplete domain");
}

} // namespace

double energy(const SystemParams& params, const SampledProfile& profile) {
  require_unit_ball(params, profile);
  const std::size_t m = profile.size();
  std::vector<double> quadratic(m, 0.0), quartic(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < params.n; ++j) {
      const double u = profile.values[j][i];
      const double du = profile.derivatives[j][i];
      quadratic[i] += du * du + params.lambda[j] * u * u;
      quartic[i] += params.mu[j] * u * u * u * u;
      for (int k = 0; k < params.n; ++k) {
        if (k == j) continue;
        const double v = profile.values[k][i];
        quartic[i] += params.beta[j][k] * v * v * u * u;
      }
    }
  }
  const double a = radial_integral(profile.radii, quadratic, params.geometry);
  const double b = radial_integral(profile.radii, quartic, params.geometry);
  return 0.5 * a - 0.25 * b;
}

double weak_form_residual(const SystemParams& params,
                          const SampledProfile& state,
                          const SampledProfile& perturbation) {
  require_unit_ball(params, state);
  perturbation.validate();
  if (perturbation.size() != state.size() ||
      perturbation.components() != state.components())
    throw Error(Errc::invalid_argument,
                "weak form: perturbation grid must match the state grid");

  const std::size_t m = state.size();
  std::vector<double> integrand(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < params.n; ++j) {
      const double u = state.values[j][i];
      const double du = state.derivatives[j][i];
      const double p = perturbation.values[j][i];
      const double dp = perturbation.derivatives[j][i];
      double f = params.mu[j] * u * u * u;
      for (int k = 0; k < params.n; ++k) {
        if (k == j) continue;
        const double v = state.values[k][i];
        f += params.beta[j][k] * v * v * u;
      }
      integrand[i] += du * dp + params.lambda[j] * u * p - f * p;
    }
  }
  return radial_integral(state.radii, integrand, params.geometry);
}

namespace {

// unsigned mass of the weak-form integrand, the scale against which the
// signed pairing is measured
double weak_form_mass(const SystemParams& params, const SampledProfile& state,
                      const SampledProfile& perturbation) {
  const std::size_t m = state.size();
  std::vector<double> integrand(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < params.n; ++j) {
      const double u = state.values[j][i];
      const double du = state.derivatives[j][i];
      const double p = perturbation.values[j][i];
      const double dp = perturbation.derivatives[j][i];
      double f = params.mu[j] * u * u * u;
      for (int k = 0; k < params.n; ++k) {
        if (k == j) continue;
        const double v = state.values[k][i];
        f += params.beta[j][k] * v * v * u;
      }
      integrand[i] += std::abs(du * dp) + std::abs(params.lambda[j] * u * p) +
                      std::abs(f * p);
    }
  }
  return radial_integral(state.radii, integrand, params.geometry);
}

} // namespace

double weak_residual_sup(const SystemParams& params,
                         const SampledProfile& state, int n_modes) {
  double worst = 0.0;
  for (int k = 1; k <= n_modes; ++k) {
    SampledProfile phi;
    phi.radii = state.radii;
    phi.values.resize(params.n);
    phi.derivatives.resize(params.n);
    phi.zero_crossings.resize(params.n);
    for (int j = 0; j < params.n; ++j) {
      phi.values[j].resize(state.size());
      phi.derivatives[j].resize(state.size());
      for (std::size_t i = 0; i < state.size(); ++i) {
        const double r = state.radii[i];
        const double w = k * std::numbers::pi * r;
        if (w < 1e-8) {
          phi.values[j][i] = 1.0 - w * w / 6.0;
          phi.derivatives[j][i] = -k * std::numbers::pi * w / 3.0;
        } else {
          phi.values[j][i] = std::sin(w) / w;
          phi.derivatives[j][i] =
              (std::cos(w) - std::sin(w) / w) * k * std::numbers::pi / w;
        }
      }
    }
    const double signed_part =
        std::abs(weak_form_residual(params, state, phi));
    const double mass = weak_form_mass(params, state, phi);
    worst = std::max(worst, signed_part / std::max(1.0, mass));
  }
  return worst;
}

} // namespace radshoot
