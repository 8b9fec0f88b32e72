#ifndef RADSHOOT_DOPRI5_HPP
#define RADSHOOT_DOPRI5_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "radshoot/types.hpp"

namespace radshoot {

// Right-hand side: dydt = f(t, y).
using OdeRhs =
    std::function<void(double, std::span<const double>, std::span<double>)>;

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;     // 0 = no cap
  double initial_step = 0.0; // 0 = choose automatically
  std::uint64_t max_steps = 20'000'000;
};

// One accepted step of the continuous extension. The quartic interpolant
//   y(t0 + theta h) = c1 + theta (c2 + (1-theta)(c3 + theta (c4 + (1-theta) c5)))
// matches state and derivative at both step ends.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> c1, c2, c3, c4, c5;

  void eval(double t, std::span<double> out) const;
  double eval_component(double t, std::size_t i) const;
};

class DenseSolution {
public:
  void append(DenseSegment&& seg);
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }
  double t_front() const;
  double t_back() const;
  std::size_t dim() const;

  // Clamped evaluation: t outside [t_front, t_back] uses the nearest segment.
  void eval(double t, std::span<double> out) const;
  double eval_component(double t, std::size_t i) const;

  const std::vector<DenseSegment>& segments() const { return segments_; }

private:
  std::size_t locate(double t) const;
  std::vector<DenseSegment> segments_;
};

struct OdeResult {
  DenseSolution dense;
  std::vector<double> y_end;
  double t_end = 0.0;
  bool reached_end = false;   // false when a callback halted integration
  long steps_accepted = 0;
  long steps_rejected = 0;
};

// Called after every accepted step; return false to halt.
using StepCallback = std::function<bool(const DenseSegment&,
                                        std::span<const double> y_end)>;

// Adaptive 5(4) Dormand-Prince integration from t0 to t_final (t_final > t0)
// with a PI step-size controller. Throws Error(solver_failure,
// "stiffness/blow-up at r=...") on step-size underflow.
//
// `checkpoints` (non-decreasing, within [t0, t_final]) force the stepper to
// land on the listed abscissae; the exact integrator states there are
// appended to *checkpoint_states. Unlike dense-output evaluation this incurs
// no interpolation error, which matters when the states are differenced.
OdeResult integrate_ode(const OdeRhs& rhs, double t0,
                        std::span<const double> y0, double t_final,
                        const OdeOptions& options,
                        const StepCallback& on_step = {},
                        std::span<const double> checkpoints = {},
                        std::vector<std::vector<double>>* checkpoint_states =
                            nullptr);

// Bisection for g(t) = 0 on [lo, hi]; g(lo) and g(hi) must have opposite
// signs. Resolves the root to near machine precision.
double bisect_root(const std::function<double(double)>& g, double lo,
                   double hi);

} // namespace radshoot

#endif
