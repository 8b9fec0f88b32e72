#ifndef RADSHOOT_NODAL_HPP
#define RADSHOOT_NODAL_HPP

#include <span>
#include <vector>

#include "radshoot/profile.hpp"
#include "radshoot/types.hpp"

namespace radshoot {

inline constexpr double kDefaultZeroTol = 1e-9;

// Largest k for which samples x_0 < ... < x_k with strictly alternating signs
// exist. Samples with |u| <= zero_tol are skipped when looking for the sign
// alternation.
int count_nodes(std::span<const double> values,
                double zero_tol = kDefaultZeroTol);

enum class Triviality { trivial, semi_trivial, non_trivial };
const char* triviality_name(Triviality t);

// trivial: every component has sup norm <= zero_tol; semi_trivial: not
// trivial but some component does; non_trivial otherwise.
Triviality classify_triviality(const SampledProfile& profile,
                               double zero_tol = kDefaultZeroTol);

// One maximal region between consecutive sign changes of a component.
struct Bump {
  double r_lo = 0.0;
  double r_hi = 0.0;
  int sign = 0;          // +1 or -1
  double l4_norm = 0.0;  // (integral of u^4 over the bump, radial measure)^(1/4)
  double h1_quotient = 0.0; // (integral |u'|^2 + lambda u^2) / l4_norm^2
};

struct BumpDecomposition {
  std::vector<std::vector<Bump>> per_component;
};

// Splits one component's support at its zero-crossing radii. When `crossings`
// is empty the roots are located by linear interpolation between samples of
// opposite sign. An all-zero component yields an empty list.
std::vector<Bump> decompose_bumps(std::span<const double> radii,
                                  std::span<const double> values,
                                  std::span<const double> derivatives,
                                  double lambda, Geometry geometry,
                                  double zero_tol = kDefaultZeroTol,
                                  std::span<const double> crossings = {});

BumpDecomposition decompose_bumps(const SystemParams& params,
                                  const SampledProfile& profile,
                                  double zero_tol = kDefaultZeroTol);

// The map x -> U(x/M + center)/M restricted to x >= 0, sampled on the image
// of the input grid. Sup-norms scale by exactly 1/M and, for center = 0,
// nodal counts are preserved.
SampledProfile rescale_profile(const SampledProfile& profile, double M,
                               double center = 0.0);

} // namespace radshoot

#endif
