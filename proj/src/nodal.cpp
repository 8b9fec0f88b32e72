#include "radshoot/nodal.hpp"

#include <algorithm>
#include <cmath>

#include "radshoot/quadrature.hpp"

namespace radshoot {

int count_nodes(std::span<const double> values, double zero_tol) {
  if (values.empty()) throw Error(Errc::invalid_argument, "empty input");
  if (!(zero_tol > 0.0))
    throw Error(Errc::invalid_argument, "zero_tol must be positive");
  int changes = 0;
  int last_sign = 0;
  for (double v : values) {
    if (!std::isfinite(v))
      throw Error(Errc::invalid_argument, "non-finite sample");
    if (std::abs(v) <= zero_tol) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return changes;
}

const char* triviality_name(Triviality t) {
  switch (t) {
  case Triviality::trivial: return "trivial";
  case Triviality::semi_trivial: return "semi-trivial";
  case Triviality::non_trivial: return "non-trivial";
  }
  return "unknown";
}

Triviality classify_triviality(const SampledProfile& profile,
                               double zero_tol) {
  profile.validate();
  int zero_components = 0;
  for (int j = 0; j < profile.components(); ++j)
    if (profile.sup_norm(j) <= zero_tol) ++zero_components;
  if (zero_components == profile.components()) return Triviality::trivial;
  if (zero_components > 0) return Triviality::semi_trivial;
  return Triviality::non_trivial;
}

namespace {

// Roots between samples of opposite sign, by linear interpolation. Samples
// inside the zero band are skipped, the root is placed between the bracketing
// definite-sign samples.
std::vector<double> interpolated_crossings(std::span<const double> radii,
                                           std::span<const double> values,
                                           double zero_tol) {
  std::vector<double> roots;
  int last_sign = 0;
  std::size_t last_idx = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::abs(v) <= zero_tol) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) {
      const double r0 = radii[last_idx], r1 = radii[i];
      const double f0 = values[last_idx], f1 = values[i];
      roots.push_back(r0 + (r1 - r0) * (-f0) / (f1 - f0));
    }
    last_sign = s;
    last_idx = i;
  }
  return roots;
}

} // namespace

std::vector<Bump> decompose_bumps(std::span<const double> radii,
                                  std::span<const double> values,
                                  std::span<const double> derivatives,
                                  double lambda, Geometry geometry,
                                  double zero_tol,
                                  std::span<const double> crossings) {
  if (radii.size() != values.size() || radii.size() != derivatives.size())
    throw Error(Errc::invalid_argument, "bumps: size mismatch");
  count_nodes(values, zero_tol); // validates the samples

  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  if (sup <= zero_tol) return {}; // trivial component

  std::vector<double> roots(crossings.begin(), crossings.end());
  if (roots.empty()) roots = interpolated_crossings(radii, values, zero_tol);

  // support boundaries: start of grid, crossings, end of grid
  std::vector<double> bounds;
  bounds.push_back(radii.front());
  for (double r : roots) bounds.push_back(r);
  bounds.push_back(radii.back());

  std::vector<Bump> bumps;
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    const double lo = bounds[b], hi = bounds[b + 1];

    // build the quadrature grid: samples inside (lo,hi) plus the exact
    // endpoints, where u vanishes at interior crossings
    std::vector<double> xs, u4, h1;
    auto push = [&](double r, double u, double du) {
      xs.push_back(r);
      u4.push_back(u * u * u * u);
      h1.push_back(du * du + lambda * u * u);
    };
    // endpoint value: interpolate u at lo/hi (zero at crossings)
    auto sample_at = [&](double r) {
      auto it = std::lower_bound(radii.begin(), radii.end(), r);
      std::size_t i = (std::size_t)std::distance(radii.begin(), it);
      if (i == 0) return std::pair<double, double>(values[0], derivatives[0]);
      if (i >= radii.size())
        return std::pair<double, double>(values.back(), derivatives.back());
      const double w = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
      return std::pair<double, double>(
          values[i - 1] + w * (values[i] - values[i - 1]),
          derivatives[i - 1] + w * (derivatives[i] - derivatives[i - 1]));
    };
    auto [ulo, dulo] = sample_at(lo);
    if (b > 0) ulo = 0.0; // interior crossing: u vanishes exactly
    push(lo, ulo, dulo);
    int sign = 0;
    double peak = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] <= lo || radii[i] >= hi) continue;
      push(radii[i], values[i], derivatives[i]);
      if (std::abs(values[i]) > peak) {
        peak = std::abs(values[i]);
        sign = values[i] > 0.0 ? 1 : -1;
      }
    }
    auto [uhi, duhi] = sample_at(hi);
    if (b + 2 < bounds.size()) uhi = 0.0;
    push(hi, uhi, duhi);

    Bump bump;
    bump.r_lo = lo;
    bump.r_hi = hi;
    bump.sign = sign;
    const double m4 = radial_integral(xs, u4, geometry);
    const double mh = radial_integral(xs, h1, geometry);
    bump.l4_norm = std::pow(std::max(m4, 0.0), 0.25);
    bump.h1_quotient =
        bump.l4_norm > 0.0 ? mh / (bump.l4_norm * bump.l4_norm) : 0.0;
    bumps.push_back(bump);
  }
  return bumps;
}

BumpDecomposition decompose_bumps(const SystemParams& params,
                                  const SampledProfile& profile,
                                  double zero_tol) {
  params.validate();
  profile.validate();
  BumpDecomposition d;
  for (int j = 0; j < profile.components(); ++j) {
    std::span<const double> crossings;
    if (j < (int)profile.zero_crossings.size())
      crossings = profile.zero_crossings[j];
    d.per_component.push_back(decompose_bumps(
        profile.radii, profile.values[j], profile.derivatives[j],
        has_lambda_term(params.geometry) ? params.lambda[j] : 0.0,
        params.geometry, zero_tol, crossings));
  }
  return d;
}

SampledProfile rescale_profile(const SampledProfile& profile, double M,
                               double center) {
  profile.validate();
  if (!(M > 0.0)) throw Error(Errc::invalid_argument, "M must be positive");
  if (center < 0.0)
    throw Error(Errc::invalid_argument, "center must be non-negative");
  if (center > profile.r_back())
    throw Error(Errc::invalid_argument, "center outside domain");

  SampledProfile out;
  out.values.resize(profile.components());
  out.derivatives.resize(profile.components());
  out.zero_crossings.resize(profile.components());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.radii[i];
    if (r < center) continue;
    out.radii.push_back(M * (r - center));
    for (int j = 0; j < profile.components(); ++j) {
      out.values[j].push_back(profile.values[j][i] / M);
      out.derivatives[j].push_back(profile.derivatives[j][i] / (M * M));
    }
  }
  for (int j = 0; j < (int)profile.zero_crossings.size(); ++j)
    for (double root : profile.zero_crossings[j])
      if (root >= center) out.zero_crossings[j].push_back(M * (root - center));
  return out;
}

} // namespace radshoot
