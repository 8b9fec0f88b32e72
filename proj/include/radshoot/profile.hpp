#ifndef RADSHOOT_PROFILE_HPP
#define RADSHOOT_PROFILE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "radshoot/types.hpp"

namespace radshoot {

// Dense radial trajectory. values[j][i] and derivatives[j][i] hold u_j and
// u_j' at radii[i]; zero_crossings[j] holds the event-located root radii of
// component j in increasing order.
struct SampledProfile {
  std::vector<double> radii;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> derivatives;
  std::vector<std::vector<double>> zero_crossings;

  int components() const { return (int)values.size(); }
  std::size_t size() const { return radii.size(); }
  double r_front() const { return radii.empty() ? 0.0 : radii.front(); }
  double r_back() const { return radii.empty() ? 0.0 : radii.back(); }

  double sup_norm(int component) const;
  double sup_norm() const; // max over components

  void validate() const; // throws on non-finite samples or unordered grids
};

// A converged boundary-value solution together with its diagnostics.
struct SolutionRecord {
  SystemParams params;
  std::vector<double> amplitudes; // u_j(0), positive after normalization
  SampledProfile profile;
  std::vector<int> nodal_counts;
  double boundary_residual = 0.0; // max_j |u_j(1)|
  double ode_residual = 0.0;      // sup-norm equation defect, verification grid
  double energy = 0.0;

  void validate(double boundary_tolerance) const;
};

// CSV with header "r,u_1,du_1,...". `comment` lines, when given, are written
// first prefixed with "# ".
void write_profile_csv(std::ostream& out, const SampledProfile& profile,
                       const std::vector<std::string>& comments = {});
SampledProfile read_profile_csv(std::istream& in);

std::string format_double(double v); // 17 significant digits

} // namespace radshoot

#endif
