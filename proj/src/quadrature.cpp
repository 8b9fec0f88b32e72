#include "radshoot/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace radshoot {

namespace {

// Integral over [a, b] of the parabola interpolating (x0,f0),(x1,f1),(x2,f2).
double parabola_integral(double x0, double x1, double x2, double f0, double f1,
                         double f2, double a, double b) {
  // Newton form: p(x) = f0 + d01 (x-x0) + d012 (x-x0)(x-x1)
  const double d01 = (f1 - f0) / (x1 - x0);
  const double d12 = (f2 - f1) / (x2 - x1);
  const double d012 = (d12 - d01) / (x2 - x0);
  auto antideriv = [&](double x) {
    // with s = x-x0: (x-x0)(x-x1) = s^2 + (x0-x1) s
    const double s = x - x0;
    return f0 * s + d01 * s * s / 2.0 +
           d012 * (s * s * s / 3.0 + (x0 - x1) * s * s / 2.0);
  };
  return antideriv(b) - antideriv(a);
}

} // namespace

double simpson(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size())
    throw Error(Errc::invalid_argument, "quadrature: size mismatch");
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::invalid_argument, "quadrature: empty input");
  if (n == 1) return 0.0;
  if (n == 2) return 0.5 * (f[0] + f[1]) * (x[1] - x[0]);

  double total = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2)
    total += parabola_integral(x[i], x[i + 1], x[i + 2], f[i], f[i + 1],
                               f[i + 2], x[i], x[i + 2]);
  if (i + 1 < n) {
    // odd interval count: close with the parabola through the last 3 nodes
    total += parabola_integral(x[n - 3], x[n - 2], x[n - 1], f[n - 3],
                               f[n - 2], f[n - 1], x[n - 2], x[n - 1]);
  }
  return total;
}

double radial_weight(double r, Geometry geometry) {
  if (is_three_dimensional(geometry))
    return 4.0 * std::numbers::pi * r * r;
  return 1.0;
}

double radial_integral(std::span<const double> r, std::span<const double> f,
                       Geometry geometry) {
  if (r.size() != f.size())
    throw Error(Errc::invalid_argument, "quadrature: size mismatch");
  std::vector<double> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    weighted[i] = f[i] * radial_weight(r[i], geometry);
  return simpson(r, weighted);
}

} // namespace radshoot
