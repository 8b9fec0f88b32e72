#ifndef RADSHOOT_QUADRATURE_HPP
#define RADSHOOT_QUADRATURE_HPP

#include <functional>
#include <span>

#include "radshoot/types.hpp"

namespace radshoot {

// Composite Simpson rule on an arbitrary strictly increasing grid. Interval
// pairs are integrated with the parabola through their three nodes; a lone
// trailing interval reuses the parabola through the last three nodes.
double simpson(std::span<const double> x, std::span<const double> f);

// Same rule applied to samples multiplied by the radial measure weight:
// 4*pi*r^2 for 3-d geometries, 1 for the 1-d ones.
double radial_integral(std::span<const double> r, std::span<const double> f,
                       Geometry geometry);

// Weight of the radial measure at a single radius.
double radial_weight(double r, Geometry geometry);

} // namespace radshoot

#endif
