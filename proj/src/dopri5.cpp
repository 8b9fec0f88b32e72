#include "radshoot/dopri5.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radshoot {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

} // namespace

void DenseSegment::eval(double t, std::span<double> out) const {
  const double theta = (t - t0) / h;
  const double omt = 1.0 - theta;
  for (std::size_t i = 0; i < c1.size(); ++i)
    out[i] = c1[i] +
             theta * (c2[i] + omt * (c3[i] + theta * (c4[i] + omt * c5[i])));
}

double DenseSegment::eval_component(double t, std::size_t i) const {
  const double theta = (t - t0) / h;
  const double omt = 1.0 - theta;
  return c1[i] +
         theta * (c2[i] + omt * (c3[i] + theta * (c4[i] + omt * c5[i])));
}

void DenseSolution::append(DenseSegment&& seg) {
  segments_.push_back(std::move(seg));
}

double DenseSolution::t_front() const {
  if (segments_.empty()) throw Error(Errc::internal, "empty dense solution");
  return segments_.front().t0;
}

double DenseSolution::t_back() const {
  if (segments_.empty()) throw Error(Errc::internal, "empty dense solution");
  return segments_.back().t0 + segments_.back().h;
}

std::size_t DenseSolution::dim() const {
  return segments_.empty() ? 0 : segments_.front().c1.size();
}

std::size_t DenseSolution::locate(double t) const {
  if (segments_.empty()) throw Error(Errc::internal, "empty dense solution");
  // first segment whose start exceeds t, then step back one
  std::size_t lo = 0, hi = segments_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (segments_[mid].t0 <= t)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo == 0 ? 0 : lo - 1;
}

void DenseSolution::eval(double t, std::span<double> out) const {
  segments_[locate(t)].eval(t, out);
}

double DenseSolution::eval_component(double t, std::size_t i) const {
  return segments_[locate(t)].eval_component(t, i);
}

double bisect_root(const std::function<double(double)>& g, double lo,
                   double hi) {
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0))
    throw Error(Errc::internal, "bisect_root: endpoints do not bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

OdeResult integrate_ode(const OdeRhs& rhs, double t0,
                        std::span<const double> y0, double t_final,
                        const OdeOptions& options, const StepCallback& on_step,
                        std::span<const double> checkpoints,
                        std::vector<std::vector<double>>* checkpoint_states) {
  if (!(t_final > t0))
    throw Error(Errc::invalid_argument, "integrate: t_final must exceed t0");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
    throw Error(Errc::invalid_argument, "integrate: tolerances must be > 0");
  const std::size_t n = y0.size();
  const double span = t_final - t0;
  const double hmax =
      options.max_step > 0.0 ? std::min(options.max_step, span) : span;

  OdeResult result;
  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> ynew(n), yerr(n), ystage(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  double t = t0;

  rhs(t, y, k1);
  if (!all_finite(k1))
    throw Error(Errc::solver_failure, "integrate: non-finite rhs at start");

  auto scaled_norm = [&](std::span<const double> v,
                         std::span<const double> ya,
                         std::span<const double> yb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = options.abs_tol +
                        options.rel_tol *
                            std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double q = v[i] / sk;
      acc += q * q;
    }
    return std::sqrt(acc / (double)n);
  };

  // initial step size (Hairer's heuristic, simplified)
  double h = options.initial_step;
  if (h <= 0.0) {
    const double d0 = scaled_norm(y, y, y);
    const double dd1 = scaled_norm(k1, y, y);
    double h0 = (d0 > 1e-10 && dd1 > 1e-10) ? 0.01 * d0 / dd1 : 1e-6 * span;
    h0 = std::min(h0, hmax);
    std::vector<double> ytmp(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    rhs(t + h0, ytmp, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk =
          options.abs_tol + options.rel_tol * std::abs(y[i]);
      const double q = (f1[i] - k1[i]) / sk;
      d2 += q * q;
    }
    d2 = std::sqrt(d2 / (double)n) / h0;
    const double dm = std::max(dd1, d2);
    const double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : h0 * 100.0;
    h = std::min({100.0 * h0, h1, hmax});
    if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6 * span;
  }
  h = std::min(h, hmax);

  constexpr double safe = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
  constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;
  double facold = 1e-4;
  bool last_rejected = false;
  bool halted = false;

  std::size_t next_cp = 0;
  const double cp_tol = 1e-10 * span;
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] < checkpoints[i - 1])
      throw Error(Errc::invalid_argument,
                  "integrate: checkpoints must be non-decreasing");
  auto flush_checkpoints = [&](double now) {
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= now + cp_tol) {
      if (checkpoint_states) checkpoint_states->push_back(y);
      ++next_cp;
    }
  };

  while (t < t_final && !halted) {
    if (result.steps_accepted + result.steps_rejected >
        (long)options.max_steps)
      throw Error(Errc::solver_failure, "integrate: step budget exceeded");
    flush_checkpoints(t);
    const double tiny = 1e-14 * std::max(std::abs(t), std::abs(span));
    if (h < tiny || h < std::numeric_limits<double>::min() * 16) {
      std::ostringstream os;
      os << "stiffness/blow-up at r=" << t;
      throw Error(Errc::solver_failure, os.str());
    }
    // clip to the next mandatory abscissa; the proposal in h survives
    double hs = h;
    bool clipped = false;
    if (next_cp < checkpoints.size() && t + hs > checkpoints[next_cp]) {
      hs = checkpoints[next_cp] - t;
      clipped = true;
    }
    if (t + hs >= t_final) hs = t_final - t;

    // stages
    for (std::size_t i = 0; i < n; ++i) ystage[i] = y[i] + hs * a21 * k1[i];
    rhs(t + c2 * hs, ystage, k2);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, ystage, k3);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, ystage, k4);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                               a54 * k4[i]);
    rhs(t + c5 * hs, ystage, k5);
    for (std::size_t i = 0; i < n; ++i)
      ystage[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                               a64 * k4[i] + a65 * k5[i]);
    rhs(t + hs, ystage, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    rhs(t + hs, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      yerr[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);

    double err = std::numeric_limits<double>::infinity();
    if (all_finite(ynew) && all_finite(yerr))
      err = scaled_norm(yerr, y, ynew);

    if (!(err <= 1.0)) {
      // rejected
      ++result.steps_rejected;
      double hnew;
      if (std::isfinite(err)) {
        const double fac11 = std::pow(err, expo1);
        hnew = hs / std::min(facc1, fac11 / safe);
      } else {
        hnew = 0.5 * hs;
      }
      h = hnew;
      last_rejected = true;
      continue;
    }

    // accepted: store the continuous extension
    DenseSegment seg;
    seg.t0 = t;
    seg.h = hs;
    seg.c1.assign(y.begin(), y.end());
    seg.c2.resize(n);
    seg.c3.resize(n);
    seg.c4.resize(n);
    seg.c5.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = hs * k1[i] - ydiff;
      seg.c2[i] = ydiff;
      seg.c3[i] = bspl;
      seg.c4[i] = ydiff - hs * k7[i] - bspl;
      seg.c5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                        d6 * k6[i] + d7 * k7[i]);
    }
    ++result.steps_accepted;
    const double t_next = t + hs;

    // step-size proposal for the next step; a clipped step keeps the
    // controller's scale instead of shrinking to the clip width
    const double fac11 = std::pow(std::max(err, 1e-30), expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    double hnew = hs / fac;
    if (last_rejected) hnew = std::min(hnew, hs);
    if (clipped) hnew = std::max(hnew, h);
    facold = std::max(err, 1e-4);
    last_rejected = false;

    t = t_next;
    std::swap(y, ynew);
    std::swap(k1, k7); // FSAL

    const DenseSegment& stored = [&]() -> const DenseSegment& {
      result.dense.append(std::move(seg));
      return result.dense.segments().back();
    }();
    if (on_step && !on_step(stored, y)) halted = true;

    h = std::min(hnew, hmax);
  }

  if (!halted) flush_checkpoints(t);
  result.y_end = y;
  result.t_end = t;
  result.reached_end = !halted && t >= t_final;
  return result;
}

} // namespace radshoot
