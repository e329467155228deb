#pragma once

#include <functional>
#include <span>

namespace sabc {

struct LogIntegral {
  double log_value = 0.0;
  /// Estimated absolute error of exp(log_value - shift), relative to the
  /// integral itself.
  double relative_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// log of the integral over [lo, hi] of exp(log_f(t)).
///
/// Adaptive 15-point Gauss-Kronrod with global (largest-error-first)
/// bisection. The integrand is evaluated as exp(log_f - shift), where the
/// shift is the largest log_f seen on a coarse scan, so integrands far below
/// the double range are handled. `breakpoints` inside (lo, hi) seed the
/// initial partition; pass kinks of the integrand here.
LogIntegral integrate_log(const std::function<double(double)>& log_f,
                          double lo, double hi,
                          std::span<const double> breakpoints = {},
                          double rel_tol = 1e-10, int max_intervals = 20000);

}  // namespace sabc
