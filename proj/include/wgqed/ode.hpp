#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "wgqed/types.hpp"

namespace wgqed {

struct OdeTolerances {
  double relative = 1e-9;
  double absolute = 1e-12;
  double initial_step = 1e-2;
  double max_step = 1.0;
  std::size_t max_steps = 50'000'000;
};

namespace detail {

// Largest componentwise error ratio |err| / (atol + rtol * max(|y0|, |y1|)).
template <class Dense>
double error_ratio(const Dense& err, const Dense& y0, const Dense& y1, const OdeTolerances& tol) {
  const auto scale = tol.absolute + tol.relative * y0.array().abs().max(y1.array().abs());
  return (err.array().abs() / scale).maxCoeff();
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of dy/dt = rhs(t, y) through the
/// increasing output times. `observe(i, t, y)` is called at every output time,
/// including times[0] with the initial state. Steps are clipped to land on the
/// output times exactly. Throws IntegrationError on step-size underflow.
template <class State, class Rhs, class Observer>
void integrate_dopri5(Rhs&& rhs, State y, std::span<const double> times, const OdeTolerances& tol,
                      Observer&& observe) {
  if (times.empty()) return;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("output times must be strictly increasing");
  }

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = times[0];
  observe(std::size_t{0}, t, static_cast<const State&>(y));
  if (times.size() == 1) return;

  State k1 = rhs(t, y);
  double h = std::min(tol.initial_step, tol.max_step);
  std::size_t steps = 0;

  for (std::size_t out = 1; out < times.size(); ++out) {
    const double target = times[out];
    while (t < target) {
      if (++steps > tol.max_steps) throw IntegrationError(t, "step budget exhausted");
      bool last = false;
      double step = std::min(h, tol.max_step);
      if (t + step >= target) {
        step = target - t;
        last = true;
      }
      const double min_step = 1e-13 * std::max(1.0, std::abs(t));
      if (step < min_step && !last) {
        throw IntegrationError(t, "step size underflow at t = " + std::to_string(t));
      }

      State k2 = rhs(t + c2 * step, State(y + step * (a21 * k1)));
      State k3 = rhs(t + c3 * step, State(y + step * (a31 * k1 + a32 * k2)));
      State k4 = rhs(t + c4 * step, State(y + step * (a41 * k1 + a42 * k2 + a43 * k3)));
      State k5 = rhs(t + c5 * step,
                     State(y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      State k6 = rhs(t + step,
                     State(y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      State y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      State k7 = rhs(t + step, y_new);
      State err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double ratio = detail::error_ratio(err, y, y_new, tol);
      if (!std::isfinite(ratio)) throw IntegrationError(t, "non-finite state during integration");
      if (ratio <= 1.0) {
        t = last ? target : t + step;
        y = std::move(y_new);
        k1 = std::move(k7);
      } else if (step < min_step) {
        throw IntegrationError(t, "step size underflow at t = " + std::to_string(t));
      }
      const double factor =
          ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      // A step shortened to hit an output time says nothing about the natural step.
      if (!(last && ratio <= 1.0 && factor > 1.0)) h = step * factor;
    }
    observe(out, t, static_cast<const State&>(y));
  }
}

}  // namespace wgqed
