// Independent numerical oracles for the test suite. These deliberately avoid
// the adaptive integrator, dense output and event machinery of the library:
// fixed-step RK4, raw-grid sign counting, bisection-only amplitude search and
// recursive adaptive Simpson quadrature.

#ifndef RADSHOOT_TESTS_ORACLES_HPP
#define RADSHOOT_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracles {

using Rhs = std::function<void(double, std::span<const double>, std::span<double>)>;

struct Rk4Trace {
  std::vector<double> t;
  std::vector<std::vector<double>> y; // y[step][component]
};

// classical fixed-step RK4 from t0 to t1 in steps of at most h
inline Rk4Trace rk4_integrate(const Rhs& rhs, double t0,
                              std::vector<double> y0, double t1, double h,
                              bool store_all = true) {
  const std::size_t n = y0.size();
  const long steps = (long)std::ceil((t1 - t0) / h - 1e-12);
  const double dt = (t1 - t0) / (double)steps;
  Rk4Trace trace;
  if (store_all) {
    trace.t.reserve((std::size_t)steps + 1);
    trace.y.reserve((std::size_t)steps + 1);
  }
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = t0;
  trace.t.push_back(t);
  trace.y.push_back(y0);
  for (long s = 0; s < steps; ++s) {
    rhs(t, y0, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      y0[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t = t0 + dt * (double)(s + 1);
    if (store_all || s + 1 == steps) {
      trace.t.push_back(t);
      trace.y.push_back(y0);
    }
  }
  return trace;
}

// raw-grid sign alternation count, ignoring samples inside the zero band
inline int count_sign_flips(std::span<const double> values,
                            double zero_tol = 1e-9) {
  int flips = 0, last = 0;
  for (double v : values) {
    if (std::abs(v) <= zero_tol) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++flips;
    last = s;
  }
  return flips;
}

// scalar ball trajectory by fixed-step RK4 from the quadratic origin series
struct ScalarShotOracle {
  double boundary = 0.0; // u(1)
  int flips = 0;
  Rk4Trace trace;
};

inline ScalarShotOracle shoot_scalar_rk4(double lambda, double mu, double a,
                                         double h = 1e-4, double h0 = 1e-6) {
  const double c = (lambda * a - mu * a * a * a) / 6.0;
  std::vector<double> y0 = {a + c * h0 * h0, 2.0 * c * h0};
  auto rhs = [lambda, mu](double r, std::span<const double> y,
                          std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -(2.0 / r) * y[1] + lambda * y[0] - mu * y[0] * y[0] * y[0];
  };
  ScalarShotOracle shot;
  shot.trace = rk4_integrate(rhs, h0, y0, 1.0, h);
  shot.boundary = shot.trace.y.back()[0];
  std::vector<double> us;
  us.reserve(shot.trace.y.size());
  for (const auto& y : shot.trace.y) us.push_back(y[0]);
  shot.flips = count_sign_flips(us);
  return shot;
}

// bisection-only amplitude search for the scalar nodal class
inline double find_amplitude_bisection(double lambda, double mu, int nodes,
                                       double h = 1e-4) {
  auto probe = [&](double a) { return shoot_scalar_rk4(lambda, mu, a, h); };
  double lo = 1e-3, hi = 1.0;
  auto plo = probe(lo);
  auto phi = probe(hi);
  while (phi.flips <= nodes) {
    lo = hi;
    plo = phi;
    hi *= 1.5;
    if (hi > 1e6) throw std::runtime_error("oracle: class unreachable");
    phi = probe(hi);
  }
  while (!(plo.flips == nodes && phi.flips == nodes + 1)) {
    const double mid = 0.5 * (lo + hi);
    auto pm = probe(mid);
    if (pm.flips <= nodes) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
      phi = pm;
    }
  }
  const double sign_p = (nodes % 2 == 0) ? 1.0 : -1.0;
  for (int it = 0; it < 100 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid).boundary * sign_p > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// recursive adaptive Simpson quadrature
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-13,
                               int depth = 40) {
  struct Impl {
    const std::function<double(double)>& f;
    double run(double a, double m, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return run(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             run(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  } impl{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return impl.run(a, m, b, fa, fm, fb, whole, tol, depth);
}

} // namespace oracles

#endif
